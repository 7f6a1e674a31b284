use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{fmt_f64, RunDir, Table};
use hfbdyn::lattice::Lattice;
use hfbdyn::potential::PotentialRegistry;
use hfbdyn::ti_torus::{ground_state_scan, pairing_bound_check};

pub fn cmd_appendix_a(cfg: &ExperimentConfig, run: &RunDir) -> Result<Vec<String>, CliError> {
    let reg = PotentialRegistry::default();
    let pot = |lat: &Lattice| reg.build(&cfg.potential.kind, &cfg.potential.params, lat);
    let sc = &cfg.appendix.scan;

    let lattice = cfg.lattice.build()?;
    let scan = ground_state_scan(&lattice, &pot(&lattice)?, sc.trials, sc.seed)?;
    let mut scan_table = Table::new(&["trial", "energy", "gap", "alpha_hs", "is_ffg"]);
    for t in &scan.trials {
        scan_table.push(vec![
            t.trial.to_string(),
            fmt_f64(t.energy),
            fmt_f64(t.gap),
            fmt_f64(t.alpha_hs),
            t.is_ffg.to_string(),
        ]);
    }
    run.write_table(None, "scan", &scan_table)?;

    let b = &cfg.appendix.bounds;
    let width = (b.family == "shell").then_some(b.shell_width);
    let rows = pairing_bound_check(cfg.lattice.dim, b.cutoff, &b.counts, width, &pot)?;
    let mut bounds = Table::new(&[
        "N",
        "n_sigma",
        "alpha_hs_sq_ratio",
        "grad_alpha_ratio",
        "s1_ratio",
        "energy_excess_ratio",
    ]);
    let mut summary = Table::new(&["N", "energy_gap_min", "alpha_hs_sq_ratio", "grad_alpha_ratio", "s1_ratio"]);
    let mut gap_min = scan.energy_gap_min;
    for r in &rows {
        bounds.push(vec![
            r.n.to_string(),
            r.n_sigma.to_string(),
            fmt_f64(r.alpha_hs_sq_ratio),
            fmt_f64(r.grad_alpha_ratio),
            fmt_f64(r.s1_ratio),
            fmt_f64(r.energy_excess_ratio),
        ]);
        let lat = Lattice::new(cfg.lattice.dim, b.cutoff, 2, vec![r.n_sigma, r.n_sigma], None)?;
        let s = ground_state_scan(&lat, &pot(&lat)?, sc.trials, sc.seed)?;
        gap_min = gap_min.min(s.energy_gap_min);
        summary.push(vec![
            r.n.to_string(),
            fmt_f64(s.energy_gap_min),
            fmt_f64(r.alpha_hs_sq_ratio),
            fmt_f64(r.grad_alpha_ratio),
            fmt_f64(r.s1_ratio),
        ]);
    }
    run.write_table(None, "bounds", &bounds)?;
    run.write_table(None, "summary", &summary)?;

    let max = |f: fn(&hfbdyn::ti_torus::BoundRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    Ok(vec![format!(
        "N={} trials={} min_gap={} zero_gap_non_ffg={} | grid min_gap={} max ratios alpha={} grad={} s1={}",
        scan.n,
        sc.trials,
        fmt_f64(scan.energy_gap_min),
        scan.zero_gap_non_ffg,
        fmt_f64(gap_min),
        fmt_f64(max(|r| r.alpha_hs_sq_ratio)),
        fmt_f64(max(|r| r.grad_alpha_ratio)),
        fmt_f64(max(|r| r.s1_ratio)),
    )])
}
