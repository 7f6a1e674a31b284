use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{fmt_f64, RunDir, Table};
use hfbdyn::diagnostics::trajectory_reports;
use hfbdyn::hfb::{evolve, EvolveOptions, IntegratorRegistry, Trajectory};
use hfbdyn::initial::{InitialParams, InitialRegistry};
use hfbdyn::lattice::Lattice;
use hfbdyn::potential::{Potential, PotentialRegistry};
use hfbdyn::quasifree::{QuasiFree, StateSnapshot};
use rayon::prelude::*;
use serde::Serialize;

pub struct Setup {
    pub lattice: Lattice,
    pub potential: Potential,
    pub initial: QuasiFree,
}

pub fn setup(cfg: &ExperimentConfig, n_sigma: &[usize], params: &InitialParams) -> Result<Setup, CliError> {
    let lattice = cfg.lattice.with_counts(n_sigma)?;
    let potential = PotentialRegistry::default().build(&cfg.potential.kind, &cfg.potential.params, &lattice)?;
    let initial = InitialRegistry::default().build(&cfg.initial.kind, params, &lattice)?;
    Ok(Setup { lattice, potential, initial })
}

pub fn run_trajectory(cfg: &ExperimentConfig, s: &Setup) -> Result<Trajectory, CliError> {
    let d = &cfg.dynamics;
    let mut opts = EvolveOptions::new(d.t_final, d.variant).with_stride(d.stride);
    if let Some(dt) = d.dt {
        opts = opts.with_dt(dt);
    }
    let reg = IntegratorRegistry::default();
    Ok(evolve(&s.initial, &s.lattice, &s.potential, &opts, reg.get(&d.integrator)?)?)
}

/// Subdirectory per N when sweeping, none otherwise.
pub fn subdir(cfg: &ExperimentConfig, n_sigma: &[usize]) -> Option<String> {
    cfg.sweep.as_ref().map(|_| format!("n{}", n_sigma.iter().sum::<usize>()))
}

#[derive(Serialize)]
struct Snapshot<'a> {
    t: f64,
    #[serde(flatten)]
    state: &'a StateSnapshot,
}

pub fn cmd_evolve(cfg: &ExperimentConfig, run: &RunDir) -> Result<Vec<String>, CliError> {
    cfg.entries()
        .par_iter()
        .map(|(ns, params)| {
            let s = setup(cfg, ns, params)?;
            let traj = run_trajectory(cfg, &s)?;
            let reports = trajectory_reports(&traj, &s.lattice)?;
            let mut table = Table::new(&[
                "t",
                "trace_omega",
                "hfb_energy",
                "purity_residual",
                "alpha_hs_norm",
                "s1",
                "s2",
                "s3",
            ]);
            for (row, rep) in traj.log.iter().zip(&reports) {
                table.push(
                    [row.t, row.trace_omega, row.hfb_energy, row.purity_residual, row.alpha_hs_norm, rep.s1, rep.s2, rep.s3]
                        .iter()
                        .map(|&x| fmt_f64(x))
                        .collect(),
                );
            }
            let sub = subdir(cfg, ns);
            run.write_table(sub.as_deref(), "trajectory", &table)?;
            if cfg.outputs.snapshots {
                let snaps: Vec<StateSnapshot> = traj.states.iter().map(|g| g.to_snapshot()).collect();
                let rows: Vec<Snapshot> = traj.times.iter().zip(&snaps).map(|(&t, state)| Snapshot { t, state }).collect();
                run.write_json(sub.as_deref(), "states.json", &rows)?;
            }
            Ok(format!(
                "N={} steps={} dt={} max_trace_drift={:.3e} max_purity_residual={:.3e} energy_drift={:.3e}",
                s.lattice.n_particles(),
                traj.log.len().saturating_sub(1) * cfg.dynamics.stride,
                fmt_f64(traj.dt),
                traj.max_trace_drift(),
                traj.max_purity_residual(),
                traj.max_energy_drift()
            ))
        })
        .collect()
}
