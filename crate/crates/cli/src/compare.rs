use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::evolve::{run_trajectory, setup, subdir};
use crate::output::{fmt_f64, RunDir, Table};
use hfbdyn::diagnostics::error_kernel;
use hfbdyn::fock::{build_hamiltonian, evolve_exact, gaussian_prepare, FockSpace};
use hfbdyn::quasifree::bloch_messiah;
use rayon::prelude::*;

const TWO: [bool; 2] = [true, false];
const FOUR: [bool; 4] = [true, true, false, false];

pub fn cmd_compare(cfg: &ExperimentConfig, run: &RunDir) -> Result<Vec<String>, CliError> {
    if !cfg.oracle.enabled {
        return Err(CliError::config("/oracle/enabled", "compare needs the oracle enabled"));
    }
    cfg.entries()
        .par_iter()
        .map(|(ns, params)| {
            let s = setup(cfg, ns, params)?;
            let space = FockSpace::with_guard(s.lattice.n_modes(), cfg.oracle.guard)?;
            let n = s.lattice.n_particles() as f64;
            let traj = run_trajectory(cfg, &s)?;
            let h = build_hamiltonian(&space, &s.lattice, &s.potential, n)?;
            let mut psi = gaussian_prepare(&space, &bloch_messiah(&s.initial)?)?;
            let mut t_prev = 0.0;
            let mut table = Table::new(&[
                "t",
                "e2_hs",
                "wick2_hs",
                "ratio2",
                "e4_hs",
                "wick4_hs",
                "ratio4",
                "e2_over_sqrt_n",
            ]);
            let mut worst: f64 = 0.0;
            for (&t, g) in traj.times.iter().zip(&traj.states) {
                if t > t_prev {
                    psi = evolve_exact(&h, &psi, t - t_prev, s.lattice.eps())?;
                    t_prev = t;
                }
                let e2 = error_kernel(&space, &psi.amps, g, &TWO)?;
                let e4 = error_kernel(&space, &psi.amps, g, &FOUR)?;
                worst = worst.max(e2.err_hs / n.sqrt());
                table.push(
                    [t, e2.err_hs, e2.wick_hs, e2.ratio, e4.err_hs, e4.wick_hs, e4.ratio, e2.err_hs / n.sqrt()]
                        .iter()
                        .map(|&x| fmt_f64(x))
                        .collect(),
                );
            }
            run.write_table(subdir(cfg, ns).as_deref(), "error_kernel", &table)?;
            Ok(format!("N={} rows={} max_e2_over_sqrt_n={worst:.3e}", s.lattice.n_particles(), table.rows.len()))
        })
        .collect()
}
