mod appendix;
mod compare;
mod config;
mod error;
mod evolve;
mod output;
mod selftest;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::ExperimentConfig;
use error::CliError;
use hfbdyn::fock::SignRule;
use output::RunDir;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "hfbdyn", version, about = "HFB dynamics on a momentum torus with an exact Fock-space oracle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for sweeps and scans.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for random initial states and scans; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the HFB equations and write the trajectory table.
    Evolve(RunArgs),
    /// Compare HFB against the exact many-body evolution.
    Compare(RunArgs),
    /// Translation-invariant ground-state scan and pairing bound tables.
    AppendixA(RunArgs),
    /// Run the small-size invariant suites.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output root; each run writes a subdirectory named by command and config hash.
    #[arg(long, env = "HFBDYN_OUT")]
    out: Option<PathBuf>,
    /// Dot-path JSON override, e.g. dynamics.t_final=2. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Fermionic sign rule for the oracle suites.
    #[arg(long, value_enum, default_value = "jordan-wigner", hide = true)]
    sign_rule: RuleArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    JordanWigner,
    CreatorStringDropped,
}

impl From<RuleArg> for SignRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::JordanWigner => SignRule::JordanWigner,
            RuleArg::CreatorStringDropped => SignRule::CreatorStringDropped,
        }
    }
}

type Runner = fn(&ExperimentConfig, &RunDir) -> Result<Vec<String>, CliError>;

fn run_experiment(name: &'static str, runner: Runner, args: &RunArgs, seed: Option<u64>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::config("", format!("cannot read {}: {e}", args.config.display())))?;
    let mut overrides = args.overrides.clone();
    if let Some(s) = seed {
        overrides.push(format!("initial.params.seed={s}"));
        overrides.push(format!("appendix.scan.seed={s}"));
    }
    let mut cfg = ExperimentConfig::load(&text, &overrides)?;
    let base = args
        .out
        .clone()
        .or_else(|| cfg.outputs.directory.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs"));
    cfg.outputs.directory = Some(base.to_string_lossy().into_owned());
    let run = RunDir::create(&base, name, &cfg)?;
    for line in runner(&cfg, &run)? {
        println!("{name}: {line}");
    }
    let dir = run.finish()?;
    println!("{name}: wrote {}", dir.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(w) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build_global()
            .map_err(|e| CliError::config("", format!("worker pool: {e}")))?;
    }
    match &cli.command {
        Command::Evolve(a) => run_experiment("evolve", evolve::cmd_evolve, a, cli.seed),
        Command::Compare(a) => run_experiment("compare", compare::cmd_compare, a, cli.seed),
        Command::AppendixA(a) => run_experiment("appendix-a", appendix::cmd_appendix_a, a, cli.seed),
        Command::Selftest(a) => {
            for line in selftest::cmd_selftest(a.sign_rule.into(), cli.seed.unwrap_or(0))? {
                println!("{line}");
            }
            Ok(())
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("{}", e.to_json());
        std::process::exit(e.exit_code());
    }
}
