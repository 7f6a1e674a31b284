//! Acceptance suite. One PASS/FAIL line per criterion.
//!
//! Exits 0 after printing the table. Set HFBDYN_ACCEPTANCE_STRICT=1 to turn
//! any FAIL into a nonzero exit status.

use hfbdyn::diagnostics::{error_kernel, subtle_identity_residual};
use hfbdyn::fock::{build_hamiltonian, evolve_exact, gaussian_prepare, norm, operator_bounds, pairing1, rdm1, FockSpace};
use hfbdyn::hfb::{evolve, EvolveOptions, Integrator, Trajectory, UnitaryMidpoint, Variant};
use hfbdyn::lattice::Lattice;
use hfbdyn::linalg::{frob, max_abs};
use hfbdyn::potential::{Potential, PotentialParams, PotentialRegistry};
use hfbdyn::quasifree::{bloch_messiah, wick, BogoliubovMap, Op, QuasiFree};
use hfbdyn::ti_torus::{ground_state_scan, lambda_state, loglog_slope, pairing_bound_check, BoundRow, TiSymbol};
use hfbdyn::CMat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

struct Ctx {
    integ: Box<dyn Integrator>,
    drifts: Vec<(String, f64)>,
}

impl Ctx {
    fn run(&mut self, label: &str, g: &QuasiFree, lat: &Lattice, v: &Potential, opts: &EvolveOptions) -> Trajectory {
        let traj = evolve(g, lat, v, opts, self.integ.as_ref()).expect("evolution failed");
        self.drifts.push((label.to_string(), traj.max_trace_drift()));
        traj
    }
}

fn attractive(lat: &Lattice, v0: f64) -> Potential {
    PotentialRegistry::default()
        .build("attractive-gaussian", &PotentialParams { v0, width: Some(2.0) }, lat)
        .unwrap()
}

/// Even profile on {-K..K} from values at |k|.
fn profile(cutoff: i32, vals: &[(i32, f64)]) -> Vec<f64> {
    (-cutoff..=cutoff)
        .map(|q| vals.iter().find(|(p, _)| *p == q.abs()).map_or(0.0, |x| x.1))
        .collect()
}

/// λ-state built from the symbol directly, so the two spin sums need not match the lattice counts.
fn paired(lat: &Lattice, prof: &[f64]) -> QuasiFree {
    let mut w = vec![0.0; lat.n_modes()];
    let mut a = vec![Complex64::new(0.0, 0.0); lat.n_momenta()];
    for (k, &x) in prof.iter().enumerate() {
        w[2 * k] = x;
        w[2 * k + 1] = x;
        a[k] = Complex64::new((x * (1.0 - x)).sqrt(), 0.0);
    }
    TiSymbol::new(lat, w, a).unwrap().assemble()
}

fn c3_setup() -> (Lattice, Potential, QuasiFree) {
    let lat = Lattice::new(1, 3, 2, vec![2, 2], None).unwrap();
    let v = attractive(&lat, 1.0);
    let (_, g) = lambda_state(&lat, &profile(3, &[(0, 1.0), (1, 0.5)])).unwrap();
    (lat, v, g)
}

fn c1() -> Outcome {
    let fs = FockSpace::new(8).unwrap();
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let g = BogoliubovMap::random(8, 1000 + seed).state();
        let psi = gaussian_prepare(&fs, &bloch_messiah(&g).unwrap()).unwrap();
        worst = worst
            .max(max_abs(&(rdm1(&fs, &psi.amps) - &g.omega)))
            .max(max_abs(&(pairing1(&fs, &psi.amps) - &g.alpha)));
    }
    Outcome { pass: worst <= 1e-10, detail: format!("max entry error {worst:.2e} over 20 states (tol 1e-10)") }
}

fn c2() -> Outcome {
    let l = 8;
    let fs = FockSpace::new(l).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut nonzero = 0;
    for i in 0..100 {
        let g = BogoliubovMap::random(l, 2000 + (i / 10) as u64).state();
        let psi = gaussian_prepare(&fs, &bloch_messiah(&g).unwrap()).unwrap();
        let len = 2 * (1 + i % 3);
        let ops: Vec<Op> = (0..len).map(|_| Op { dagger: rng.random(), mode: rng.random_range(0..l) }).collect();
        let exact = fs.expectation(&ops, &psi.amps);
        let w = wick(&g, &ops).unwrap();
        if exact.norm() > 1e-8 {
            nonzero += 1;
        }
        worst = worst.max((exact - w).norm());
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("max |wick - exact| {worst:.2e} over 100 monomials of length 2/4/6, {nonzero} nonzero (tol 1e-10)"),
    }
}

fn c3(ctx: &mut Ctx) -> Outcome {
    let (lat, v, g) = c3_setup();
    let traj = ctx.run("C3", &g, &lat, &v, &EvolveOptions::new(1.0, Variant::Hfb));
    let purity = traj.max_purity_residual();
    let trace = traj.log.iter().map(|r| (r.trace_omega - 4.0).abs()).fold(0.0, f64::max);
    let anti = traj.log.iter().map(|r| r.antisymmetry_residual).fold(0.0, f64::max);
    Outcome {
        pass: purity <= 1e-9 && trace <= 1e-9 && anti <= 1e-10,
        detail: format!(
            "{} logged steps: purity {purity:.2e} (tol 1e-9), trace {trace:.2e} (tol 1e-9), antisymmetry {anti:.2e} (tol 1e-10)",
            traj.log.len()
        ),
    }
}

fn c4(ctx: &mut Ctx) -> Outcome {
    let (lat, v, g) = c3_setup();
    let h0 = lat.eps() / 20.0;
    let reference = ctx.run("C4 reference", &g, &lat, &v, &EvolveOptions::new(1.0, Variant::Hfb).with_dt(h0 / 128.0));
    let errs: Vec<f64> = (0..4)
        .map(|i| {
            let opts = EvolveOptions::new(1.0, Variant::Hfb).with_dt(h0 / 2f64.powi(i));
            let t = ctx.run(&format!("C4 dt/{}", 1 << i), &g, &lat, &v, &opts);
            frob(&(&t.last().omega - &reference.last().omega))
        })
        .collect();
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    Outcome {
        pass: ratios.iter().all(|r| (3.2..=4.8).contains(r)),
        detail: format!(
            "errors {} ratios {} (want 4 +/- 20%)",
            errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>().join(" "),
            ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(" ")
        ),
    }
}

fn c5(ctx: &mut Ctx) -> Outcome {
    let lat = Lattice::new(1, 3, 2, vec![2, 2], None).unwrap();
    let v = Potential::zero(&lat);
    let fs = FockSpace::new(lat.n_modes()).unwrap();
    let g = BogoliubovMap::random(lat.n_modes(), 5).state();
    let psi = gaussian_prepare(&fs, &bloch_messiah(&g).unwrap()).unwrap();
    let h = build_hamiltonian(&fs, &lat, &v, g.trace()).unwrap();
    let exact = evolve_exact(&h, &psi, 1.0, lat.eps()).unwrap();
    let traj = ctx.run("C5", &g, &lat, &v, &EvolveOptions::new(1.0, Variant::Hfb));
    let err = max_abs(&(rdm1(&fs, &exact.amps) - &traj.last().omega));
    Outcome { pass: err <= 1e-9, detail: format!("max entry error {err:.2e} at T = 1 on 14 modes (tol 1e-9)") }
}

fn c6(ctx: &mut Ctx) -> Outcome {
    let cases: [(Vec<usize>, Vec<(i32, f64)>); 3] = [
        (vec![1, 1], vec![(0, 1.0)]),
        (vec![2, 1], vec![(0, 1.0), (1, 0.25)]),
        (vec![2, 2], vec![(0, 1.0), (1, 0.5)]),
    ];
    let mut ratios = vec![];
    let mut e0_max: f64 = 0.0;
    for (ns, vals) in cases {
        let lat = Lattice::new(1, 3, 2, ns, None).unwrap();
        let v = attractive(&lat, 1.0);
        let g = paired(&lat, &profile(3, &vals));
        let fs = FockSpace::new(lat.n_modes()).unwrap();
        let psi = gaussian_prepare(&fs, &bloch_messiah(&g).unwrap()).unwrap();
        e0_max = e0_max.max(error_kernel(&fs, &psi.amps, &g, &[true, false]).unwrap().err_hs);
        let h = build_hamiltonian(&fs, &lat, &v, g.trace()).unwrap();
        let exact = evolve_exact(&h, &psi, 0.5, lat.eps()).unwrap();
        let traj = ctx.run(&format!("C6 N={}", lat.n_particles()), &g, &lat, &v, &EvolveOptions::new(0.5, Variant::Hfb));
        let err = error_kernel(&fs, &exact.amps, traj.last(), &[true, false]).unwrap().err_hs;
        ratios.push(err / (lat.n_particles() as f64).sqrt());
    }
    let monotone = ratios.windows(2).all(|w| w[1] <= w[0]);
    Outcome {
        pass: monotone && e0_max <= 1e-10,
        detail: format!(
            "N=2,3,4 ratios {} monotone {monotone}, max t=0 kernel {e0_max:.2e} (tol 1e-10)",
            ratios.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(" ")
        ),
    }
}

fn c7(ctx: &mut Ctx) -> Outcome {
    let cases: [(Vec<usize>, Vec<(i32, f64)>); 4] = [
        (vec![2, 1], vec![(0, 1.0), (1, 0.25)]),
        (vec![2, 2], vec![(0, 1.0), (1, 0.5)]),
        (vec![3, 3], vec![(0, 1.0), (1, 0.75), (2, 0.25)]),
        (vec![4, 4], vec![(0, 1.0), (1, 1.0), (2, 0.5)]),
    ];
    let mut c_hat = None;
    let mut worst_excess = f64::NEG_INFINITY;
    for (ns, vals) in cases {
        let lat = Lattice::new(1, 3, 2, ns, None).unwrap();
        let v = attractive(&lat, 1.0);
        let g = paired(&lat, &profile(3, &vals));
        let n = lat.n_particles() as f64;
        let scale = n * lat.eps();
        let traj = ctx.run(&format!("C7 N={n}"), &g, &lat, &v, &EvolveOptions::new(1.0, Variant::Hfb));
        let a0 = g.alpha_hs();
        let c = *c_hat.get_or_insert_with(|| {
            traj.log
                .iter()
                .filter(|r| r.t > 0.0)
                .map(|r| scale / r.t * (r.alpha_hs_norm / a0).ln())
                .fold(0.0, f64::max)
        });
        for r in &traj.log {
            worst_excess = worst_excess.max(r.alpha_hs_norm / ((c * r.t / scale).exp() * a0) - 1.0);
        }
    }
    let c = c_hat.unwrap();
    let drift = ctx.drifts.iter().map(|d| d.1).fold(0.0, f64::max);
    let worst_run = ctx.drifts.iter().fold(("", 0.0), |acc, d| if d.1 >= acc.1 { (d.0.as_str(), d.1) } else { acc });
    Outcome {
        pass: drift <= 1e-9 && worst_excess <= 1e-9,
        detail: format!(
            "trace drift {drift:.2e} over {} trajectories (worst {}, tol 1e-9); C fitted on N=3 is {c:.4}, \
             max relative excess over the envelope {worst_excess:.2e}",
            ctx.drifts.len(),
            worst_run.0
        ),
    }
}

fn c8() -> Outcome {
    let lat = Lattice::new(1, 3, 2, vec![3, 1], None).unwrap();
    let v = attractive(&lat, 0.3);
    let scan = ground_state_scan(&lat, &v, 1000, 8).unwrap();
    let ffg_zero = scan.trials.iter().filter(|t| t.is_ffg).all(|t| t.gap.abs() <= scan.zero_tol);
    let off_ffg = scan.trials.iter().filter(|t| !t.is_ffg).map(|t| t.gap).fold(f64::INFINITY, f64::min);
    Outcome {
        pass: scan.energy_gap_min >= -1e-9 && scan.zero_gap_non_ffg == 0 && ffg_zero,
        detail: format!(
            "1000 trials, min gap {:.3e} (trial {}), min gap off the FFG {off_ffg:.3e}, zero gaps off the FFG: {}",
            scan.energy_gap_min, scan.argmin_trial, scan.zero_gap_non_ffg
        ),
    }
}

fn c9() -> Outcome {
    let rows = pairing_bound_check(1, 12, &[1, 3, 5, 7, 9], Some(1.0), &|l| Ok(attractive(l, 1.0))).unwrap();
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let slope = |f: fn(&BoundRow) -> f64| loglog_slope(&ns, &rows.iter().map(f).collect::<Vec<_>>());
    let slopes = [slope(|r| r.alpha_hs_sq_ratio), slope(|r| r.grad_alpha_ratio), slope(|r| r.s1_ratio)];
    let finite = rows.iter().all(|r| {
        [r.alpha_hs_sq_ratio, r.grad_alpha_ratio, r.s1_ratio].iter().all(|x| x.is_finite())
    });
    Outcome {
        pass: finite && slopes.iter().all(|s| s.abs() <= 0.15),
        detail: format!(
            "N=2..18 slopes alpha {:.3} grad {:.3} shift {:.3} (tol 0.15)",
            slopes[0], slopes[1], slopes[2]
        ),
    }
}

fn c10() -> Outcome {
    let lat = Lattice::new(1, 3, 2, vec![2, 2], None).unwrap();
    let duals = lat.dual_vectors();
    let mut worst: f64 = 0.0;
    for seed in 0..50 {
        let b = BogoliubovMap::random(lat.n_modes(), 3000 + seed);
        let g = b.state();
        for p in &duals {
            worst = worst.max(subtle_identity_residual(&b, &g, &lat, p).unwrap().0);
        }
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("max residual {worst:.2e} over 50 states x {} momenta on 14 modes (tol 1e-10)", duals.len()),
    }
}

fn random_matrix(l: usize, rng: &mut ChaCha8Rng) -> CMat {
    let rank = if rng.random_bool(0.3) { 1 } else { l };
    let mut m = CMat::zeros(l, l);
    for _ in 0..rank {
        let u = CMat::from_fn(l, 1, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let w = CMat::from_fn(1, l, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        m += u * w;
    }
    m
}

fn random_psi(fs: &FockSpace, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    match rng.random_range(0..3) {
        0 => {
            let mut v: Vec<Complex64> = (0..fs.dim())
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let n = norm(&v);
            v.iter_mut().for_each(|x| *x /= n);
            v
        }
        1 => {
            let g = BogoliubovMap::random(fs.n_modes(), rng.random()).state();
            gaussian_prepare(fs, &bloch_messiah(&g).unwrap()).unwrap().amps
        }
        _ => fs.basis_state(rng.random_range(0..fs.dim())).amps,
    }
}

fn c11() -> Outcome {
    let fs = FockSpace::new(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut violations = [0usize; 8];
    let mut tightest = [f64::INFINITY; 8];
    for _ in 0..500 {
        let o = random_matrix(8, &mut rng);
        let psi = random_psi(&fs, &mut rng);
        for (i, b) in operator_bounds(&fs, &o, &psi).iter().enumerate() {
            if !b.holds(1e-12) {
                violations[i] += 1;
            }
            if b.rhs > 0.0 {
                tightest[i] = tightest[i].min((b.rhs - b.lhs) / b.rhs);
            }
        }
    }
    Outcome {
        pass: violations.iter().all(|&v| v == 0),
        detail: format!(
            "500 samples x 8 inequalities, violations {:?}, smallest relative margins {}",
            violations,
            tightest.iter().map(|t| format!("{t:.2}")).collect::<Vec<_>>().join(" ")
        ),
    }
}

fn main() {
    let strict = std::env::var("HFBDYN_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut ctx = Ctx { integ: Box::new(UnitaryMidpoint::default()), drifts: vec![] };
    type Check<'a> = Box<dyn FnMut(&mut Ctx) -> Outcome + 'a>;
    let checks: Vec<(u32, &str, Option<f64>, Check)> = vec![
        (1, "quasi-free oracle identity", Some(30.0), Box::new(|_| c1())),
        (2, "Wick rule equivalence", Some(120.0), Box::new(|_| c2())),
        (3, "structure preservation", Some(60.0), Box::new(c3)),
        (4, "integrator order", None, Box::new(c4)),
        (5, "free-field exactness", None, Box::new(c5)),
        (6, "one-body error trend in N", Some(600.0), Box::new(c6)),
        (7, "trace conservation and pairing growth", None, Box::new(c7)),
        (8, "translation-invariant ground-state scan", Some(300.0), Box::new(|_| c8())),
        (9, "pairing bound ratio tables", None, Box::new(|_| c9())),
        (10, "shift identity", None, Box::new(|_| c10())),
        (11, "Fock-space operator bounds", None, Box::new(|_| c11())),
    ];
    let mut failed = vec![];
    for (id, title, budget, mut check) in checks {
        let start = Instant::now();
        let out = check(&mut ctx);
        let secs = start.elapsed().as_secs_f64();
        let in_budget = budget.is_none_or(|b| secs <= b);
        let pass = out.pass && in_budget;
        let budget_note = budget.map_or(String::new(), |b| format!(", budget {b:.0} s"));
        println!(
            "criterion {id:>2} {} {title}: {} [{secs:.1} s{budget_note}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail
        );
        if !pass {
            failed.push(id);
        }
    }
    println!("acceptance: {} of 11 criteria pass{}", 11 - failed.len(), if failed.is_empty() {
        String::new()
    } else {
        format!(", failing {failed:?}")
    });
    if strict && !failed.is_empty() {
        std::process::exit(1);
    }
}
