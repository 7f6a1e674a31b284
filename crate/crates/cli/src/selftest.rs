//! Small-size invariant suites across all modules.

use crate::error::CliError;
use hfbdyn::diagnostics::subtle_identity_residual;
use hfbdyn::fock::{gaussian_prepare, norm, operator_bounds, pairing1, rdm1, FockSpace, SignRule};
use hfbdyn::hfb::{evolve, EvolveOptions, IntegratorRegistry, Variant};
use hfbdyn::lattice::Lattice;
use hfbdyn::linalg::max_abs;
use hfbdyn::potential::{PotentialParams, PotentialRegistry};
use hfbdyn::quasifree::{bloch_messiah, wick, BogoliubovMap, Op};
use hfbdyn::CMat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

type Suite = fn(&FockSpace, u64) -> Result<String, String>;

fn random_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let n = norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

fn car(fs: &FockSpace, seed: u64) -> Result<String, String> {
    let fs = FockSpace::new(4).map_err(|e| e.to_string())?.with_rule(fs.rule());
    let psi = random_vector(fs.dim(), &mut ChaCha8Rng::seed_from_u64(seed));
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let pairs = [(Op::annihilate(i), Op::create(j), i == j), (Op::annihilate(i), Op::annihilate(j), false)];
            for (a, b, delta) in pairs {
                let ab = fs.apply_ops(&[a, b], &psi);
                let ba = fs.apply_ops(&[b, a], &psi);
                let d: Vec<Complex64> = (0..psi.len())
                    .map(|n| ab[n] + ba[n] - if delta { psi[n] } else { Complex64::new(0.0, 0.0) })
                    .collect();
                worst = worst.max(norm(&d));
            }
        }
    }
    if worst <= 1e-12 {
        Ok(format!("anticommutators off by {worst:.1e}"))
    } else {
        Err(format!("anticommutator residual {worst:.3e}"))
    }
}

fn lemma_bounds(fs: &FockSpace, seed: u64) -> Result<String, String> {
    let fs = FockSpace::new(6).map_err(|e| e.to_string())?.with_rule(fs.rule());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let o = CMat::from_fn(6, 6, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let psi = random_vector(fs.dim(), &mut rng);
        if let Some(b) = operator_bounds(&fs, &o, &psi).iter().find(|b| !b.holds(1e-12)) {
            return Err(format!("{}: {:.6e} > {:.6e}", b.label, b.lhs, b.rhs));
        }
    }
    Ok("100 samples x 8 estimates hold".into())
}

fn wick_vs_oracle(fs: &FockSpace, seed: u64) -> Result<String, String> {
    let l = 6;
    let fs = FockSpace::new(l).map_err(|e| e.to_string())?.with_rule(fs.rule());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for s in 0..5 {
        let g = BogoliubovMap::random(l, seed.wrapping_add(s)).state();
        let map = bloch_messiah(&g).map_err(|e| e.to_string())?;
        let psi = gaussian_prepare(&fs, &map).map_err(|e| e.to_string())?;
        worst = worst
            .max(max_abs(&(rdm1(&fs, &psi.amps) - &g.omega)))
            .max(max_abs(&(pairing1(&fs, &psi.amps) - &g.alpha)));
        for m in 0..12 {
            let len = 2 * (1 + m % 3);
            let ops: Vec<Op> = (0..len).map(|_| Op { dagger: rng.random(), mode: rng.random_range(0..l) }).collect();
            let w = wick(&g, &ops).map_err(|e| e.to_string())?;
            worst = worst.max((fs.expectation(&ops, &psi.amps) - w).norm());
        }
    }
    if worst <= 1e-10 {
        Ok(format!("Wick values and oracle agree to {worst:.1e}"))
    } else {
        Err(format!("Wick vs oracle mismatch {worst:.3e}"))
    }
}

fn purity_transport(_: &FockSpace, seed: u64) -> Result<String, String> {
    let lat = Lattice::new(1, 1, 2, vec![1, 1], None).map_err(|e| e.to_string())?;
    let v = PotentialRegistry::default()
        .build("attractive-gaussian", &PotentialParams { v0: 1.0, width: Some(2.0) }, &lat)
        .map_err(|e| e.to_string())?;
    let g = BogoliubovMap::random(lat.n_modes(), seed).state();
    let reg = IntegratorRegistry::default();
    let integ = reg.get("unitary-midpoint").map_err(|e| e.to_string())?;
    let traj = evolve(&g, &lat, &v, &EvolveOptions::new(0.5, Variant::Hfb), integ).map_err(|e| e.to_string())?;
    let (p, d) = (traj.max_purity_residual(), traj.max_trace_drift());
    if p <= 1e-9 && d <= 1e-9 {
        Ok(format!("purity {p:.1e}, trace drift {d:.1e}"))
    } else {
        Err(format!("purity {p:.3e}, trace drift {d:.3e}"))
    }
}

fn subtle_identity(_: &FockSpace, seed: u64) -> Result<String, String> {
    let lat = Lattice::new(1, 1, 2, vec![1, 1], None).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for s in 0..5 {
        let b = BogoliubovMap::random(lat.n_modes(), seed.wrapping_add(s));
        let g = b.state();
        for p in lat.dual_vectors() {
            worst = worst.max(subtle_identity_residual(&b, &g, &lat, &p).map_err(|e| e.to_string())?.0);
        }
    }
    if worst <= 1e-10 {
        Ok(format!("residual {worst:.1e}"))
    } else {
        Err(format!("residual {worst:.3e}"))
    }
}

const SUITES: [(&str, Suite); 5] = [
    ("car", car),
    ("lemma-bounds", lemma_bounds),
    ("wick-vs-oracle", wick_vs_oracle),
    ("purity-transport", purity_transport),
    ("subtle-identity", subtle_identity),
];

pub fn cmd_selftest(rule: SignRule, seed: u64) -> Result<Vec<String>, CliError> {
    let fs = FockSpace::new(1)?.with_rule(rule);
    let mut lines = vec![];
    let mut failed = vec![];
    for (name, suite) in SUITES {
        let start = Instant::now();
        let out = suite(&fs, seed);
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => lines.push(format!("{name} PASS {detail} ({secs:.2} s)")),
            Err(detail) => {
                lines.push(format!("{name} FAIL {detail} ({secs:.2} s)"));
                failed.push(name);
            }
        }
    }
    for l in &lines {
        println!("selftest {l}");
    }
    if failed.is_empty() {
        Ok(vec![format!("selftest: all {} suites pass", SUITES.len())])
    } else {
        Err(CliError::Selftest(failed.join(", ")))
    }
}
