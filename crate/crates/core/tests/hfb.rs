//! HFB solver against exact many-body dynamics and its own invariants.

use hfbdyn::fock::{build_hamiltonian, energy, evolve_exact, gaussian_prepare, inner, rdm1, FockSpace};
use hfbdyn::hfb::{evolve, EvolveOptions, HfbModel, IntegratorRegistry, Variant};
use hfbdyn::lattice::Lattice;
use hfbdyn::linalg::max_abs;
use hfbdyn::potential::{Potential, PotentialParams, PotentialRegistry};
use hfbdyn::quasifree::{bloch_messiah, BogoliubovMap, Op, QuasiFree};
use hfbdyn::CMat;
use num_complex::Complex64;

fn gaussian(lat: &Lattice, v0: f64, width: f64) -> Potential {
    PotentialRegistry::default()
        .build("gaussian", &PotentialParams { v0, width: Some(width) }, lat)
        .unwrap()
}

fn lattices() -> Vec<Lattice> {
    vec![
        Lattice::new(1, 1, 2, vec![1, 1], None).unwrap(),
        Lattice::new(1, 2, 1, vec![2], Some(0.6)).unwrap(),
        Lattice::new(2, 1, 1, vec![3], None).unwrap(),
    ]
}

/// d/dt ⟨O⟩ = (i/ε)(⟨Hψ, Oψ⟩ - ⟨O*ψ, Hψ⟩) with O = A_1 A_2.
fn exact_rate(fs: &FockSpace, psi: &[Complex64], hpsi: &[Complex64], ops: [Op; 2], eps: f64) -> Complex64 {
    let o_psi = fs.apply_ops(&ops, psi);
    let adj = [ops[1].adjoint(), ops[0].adjoint()];
    let oadj_psi = fs.apply_ops(&adj, psi);
    Complex64::new(0.0, 1.0 / eps) * (inner(hpsi, &o_psi) - inner(&oadj_psi, hpsi))
}

#[test]
fn rhs_is_exact_derivative_at_quasi_free_states() {
    for (i, lat) in lattices().into_iter().enumerate() {
        let l = lat.n_modes();
        let v = gaussian(&lat, 1.7, 1.2);
        let fs = FockSpace::new(l).unwrap();
        for seed in 0..3 {
            let g = BogoliubovMap::random(l, 10 * i as u64 + seed).state();
            let n = 2.5;
            let psi = gaussian_prepare(&fs, &bloch_messiah(&g).unwrap()).unwrap().amps;
            let h = build_hamiltonian(&fs, &lat, &v, n).unwrap();
            let hpsi = h.apply(&psi);
            let model = HfbModel::new(&lat, &v, n);
            let (dw, da) = model.rhs(&g).unwrap();
            let mut ew = CMat::zeros(l, l);
            let mut ea = CMat::zeros(l, l);
            for x in 0..l {
                for y in 0..l {
                    // ω(x;y) = ⟨a*_y a_x⟩, α(x;y) = ⟨a_y a_x⟩
                    ew[(x, y)] = exact_rate(&fs, &psi, &hpsi, [Op::create(y), Op::annihilate(x)], lat.eps());
                    ea[(x, y)] = exact_rate(&fs, &psi, &hpsi, [Op::annihilate(y), Op::annihilate(x)], lat.eps());
                }
            }
            assert!(max_abs(&(&ew - &dw)) < 1e-10, "lattice {i} seed {seed}: dω off by {}", max_abs(&(&ew - &dw)));
            assert!(max_abs(&(&ea - &da)) < 1e-10, "lattice {i} seed {seed}: dα off by {}", max_abs(&(&ea - &da)));
            let e = model.energy(&g).unwrap();
            assert!((energy(&h, &psi) - e).abs() < 1e-9, "lattice {i} seed {seed}: energy");
        }
    }
}

#[test]
fn free_dynamics_matches_oracle() {
    let lat = Lattice::new(1, 1, 2, vec![1, 1], None).unwrap();
    let l = lat.n_modes();
    let v = Potential::zero(&lat);
    let fs = FockSpace::new(l).unwrap();
    let g = BogoliubovMap::random(l, 4).state();
    let psi = gaussian_prepare(&fs, &bloch_messiah(&g).unwrap()).unwrap();
    let h = build_hamiltonian(&fs, &lat, &v, g.trace()).unwrap();
    let exact = evolve_exact(&h, &psi, 1.0, lat.eps()).unwrap();
    let reg = IntegratorRegistry::default();
    let traj = evolve(&g, &lat, &v, &EvolveOptions::new(1.0, Variant::Hfb), reg.get("unitary-midpoint").unwrap()).unwrap();
    assert!(max_abs(&(rdm1(&fs, &exact.amps) - &traj.last().omega)) < 1e-9);
}

#[test]
fn invariants_along_interacting_run() {
    let lat = Lattice::new(1, 2, 2, vec![2, 2], None).unwrap();
    let v = gaussian(&lat, -1.0, 2.0);
    let g = BogoliubovMap::random(lat.n_modes(), 9).state();
    let reg = IntegratorRegistry::default();
    let traj = evolve(&g, &lat, &v, &EvolveOptions::new(0.5, Variant::Hfb), reg.get("unitary-midpoint").unwrap()).unwrap();
    assert!(traj.max_purity_residual() < 1e-9);
    assert!(traj.max_trace_drift() < 1e-9);
    assert!(traj.log.iter().all(|r| r.antisymmetry_residual < 1e-10));
    assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(traj.times.len(), traj.states.len());
    assert!(traj.max_energy_drift() < 1e-4, "energy drift {}", traj.max_energy_drift());
}

#[test]
fn hf_keeps_alpha_zero_and_rejects_pairing() {
    let lat = Lattice::new(1, 2, 1, vec![2], None).unwrap();
    let v = gaussian(&lat, 1.0, 1.0);
    let reg = IntegratorRegistry::default();
    let integ = reg.get("unitary-midpoint").unwrap();
    let paired = BogoliubovMap::random(lat.n_modes(), 2).state();
    assert!(evolve(&paired, &lat, &v, &EvolveOptions::new(0.2, Variant::Hf), integ).is_err());

    // A non-stationary Slater state: rotate a plane wave into a superposition.
    let mut w = QuasiFree::slater(5, &[1, 2]);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut rot = CMat::identity(5, 5);
    rot[(2, 2)] = Complex64::new(s, 0.0);
    rot[(2, 3)] = Complex64::new(s, 0.0);
    rot[(3, 2)] = Complex64::new(-s, 0.0);
    rot[(3, 3)] = Complex64::new(s, 0.0);
    w.omega = &rot * &w.omega * rot.adjoint();
    let hf = evolve(&w, &lat, &v, &EvolveOptions::new(0.5, Variant::Hf), integ).unwrap();
    let hfb = evolve(&w, &lat, &v, &EvolveOptions::new(0.5, Variant::Hfb), integ).unwrap();
    assert_eq!(hfb.last().alpha.norm(), 0.0);
    assert!(max_abs(&(&hf.last().omega - &hfb.last().omega)) < 1e-13);
    assert!(max_abs(&(&hf.last().omega - &w.omega)) > 1e-3);
}

#[test]
fn rk4_and_midpoint_agree() {
    let lat = Lattice::new(1, 1, 2, vec![1, 1], None).unwrap();
    let v = gaussian(&lat, -1.0, 2.0);
    let g = BogoliubovMap::random(lat.n_modes(), 5).state();
    let reg = IntegratorRegistry::default();
    let opts = EvolveOptions::new(0.5, Variant::Hfb).with_dt(lat.eps() / 80.0);
    let a = evolve(&g, &lat, &v, &opts, reg.get("unitary-midpoint").unwrap()).unwrap();
    let b = evolve(&g, &lat, &v, &opts, reg.get("rk4").unwrap()).unwrap();
    assert!(a.last().distance(b.last()) < 1e-5, "{}", a.last().distance(b.last()));
    assert!(reg.get("euler").is_err());
}

#[test]
fn hb_variant_equals_flagged_model() {
    let lat = Lattice::new(1, 1, 2, vec![1, 1], None).unwrap();
    let v = gaussian(&lat, -1.0, 2.0);
    let g = BogoliubovMap::random(lat.n_modes(), 6).state();
    let reg = IntegratorRegistry::default();
    let integ = reg.get("unitary-midpoint").unwrap();
    let hb = evolve(&g, &lat, &v, &EvolveOptions::new(0.3, Variant::Hb), integ).unwrap();
    assert!(hb.max_trace_drift() < 1e-9);
    assert!(hb.max_purity_residual() < 1e-9);
    let hfb = evolve(&g, &lat, &v, &EvolveOptions::new(0.3, Variant::Hfb), integ).unwrap();
    assert!(hb.last().distance(hfb.last()) > 1e-6);
}
