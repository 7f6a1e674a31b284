//! Translation-invariant quasi-free states on the momentum torus.
//!
//! A symbol fixes ω̂(k, σ) per mode and a pairing amplitude α̂(k) coupling
//! (k, ↑) with (-k, ↓). Assembled, α((k,↑);(-k,↓)) = α̂(k) and
//! α((-k,↓);(k,↑)) = -α̂(k).

use crate::diagnostics::{gradient_commutator_hs, semiclassical_report};
use crate::error::{Error, Result};
use crate::hfb::HfbModel;
use crate::lattice::Lattice;
use crate::potential::Potential;
use crate::quasifree::QuasiFree;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

const UP: usize = 0;
const DOWN: usize = 1;

#[derive(Clone, Debug)]
pub struct TiSymbol {
    lattice: Lattice,
    /// Indexed by flat mode.
    pub omega_hat: Vec<f64>,
    /// Indexed by momentum index of the spin-up leg.
    pub alpha_hat: Vec<Complex64>,
}

impl TiSymbol {
    pub fn new(lattice: &Lattice, omega_hat: Vec<f64>, alpha_hat: Vec<Complex64>) -> Result<Self> {
        if omega_hat.len() != lattice.n_modes() || alpha_hat.len() != lattice.n_momenta() {
            return Err(Error::Dimension("symbol sizes do not match the lattice".into()));
        }
        if lattice.spins() != 2 && alpha_hat.iter().any(|a| a.norm() > 0.0) {
            return Err(Error::Config("pairing between (k,up) and (-k,down) needs two spin states".into()));
        }
        if let Some(w) = omega_hat.iter().find(|w| !(**w >= -1e-12 && **w <= 1.0 + 1e-12)) {
            return Err(Error::Config(format!("occupation {w} outside [0, 1]")));
        }
        Ok(TiSymbol { lattice: lattice.clone(), omega_hat, alpha_hat })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn spin_count(&self, sigma: usize) -> f64 {
        let s = self.lattice.spins();
        self.omega_hat.iter().enumerate().filter(|(m, _)| m % s == sigma).map(|(_, w)| w).sum()
    }

    pub fn total(&self) -> f64 {
        self.omega_hat.iter().sum()
    }

    fn partner(&self, k_index: usize) -> usize {
        let minus: Vec<i32> = self.lattice.momentum(k_index).iter().map(|c| -c).collect();
        self.lattice.k_index(&minus).expect("window is symmetric")
    }

    /// Largest pointwise violation of ω̂(1-ω̂) = |α̂|² with equal
    /// occupations on each paired block.
    pub fn symbol_purity_residual(&self) -> f64 {
        if self.lattice.spins() != 2 {
            return self.omega_hat.iter().map(|w| (w * (1.0 - w)).abs()).fold(0.0, f64::max);
        }
        (0..self.lattice.n_momenta())
            .map(|k| {
                let a = self.omega_hat[mode_of(&self.lattice, k, UP)];
                let b = self.omega_hat[mode_of(&self.lattice, self.partner(k), DOWN)];
                let z = self.alpha_hat[k].norm_sqr();
                (a * (1.0 - a) - z).abs().max((b * (1.0 - b) - z).abs()).max(if z > 0.0 { (a - b).abs() } else { 0.0 })
            })
            .fold(0.0, f64::max)
    }

    pub fn assemble(&self) -> QuasiFree {
        let l = self.lattice.n_modes();
        let mut g = QuasiFree::vacuum(l);
        for (m, w) in self.omega_hat.iter().enumerate() {
            g.omega[(m, m)] = Complex64::new(*w, 0.0);
        }
        if self.lattice.spins() == 2 {
            for k in 0..self.lattice.n_momenta() {
                let a = self.alpha_hat[k];
                if a.norm() == 0.0 {
                    continue;
                }
                let up = mode_of(&self.lattice, k, UP);
                let down = mode_of(&self.lattice, self.partner(k), DOWN);
                g.alpha[(up, down)] = a;
                g.alpha[(down, up)] = -a;
            }
        }
        g
    }

    pub fn is_close(&self, other: &TiSymbol, tol: f64) -> bool {
        self.omega_hat.iter().zip(&other.omega_hat).all(|(a, b)| (a - b).abs() <= tol)
            && self.alpha_hat.iter().zip(&other.alpha_hat).all(|(a, b)| (a - b).norm() <= tol)
    }
}

fn mode_of(lattice: &Lattice, k_index: usize, sigma: usize) -> usize {
    k_index * lattice.spins() + sigma
}

/// Cumulative mode counts of balls {|k|² ≤ r} that fit inside the window.
pub fn closed_shell_counts(lattice: &Lattice) -> Vec<usize> {
    let mut radii: Vec<i64> = (0..lattice.n_momenta()).map(|k| lattice.k_squared(k)).collect();
    radii.sort_unstable();
    radii.dedup();
    let kmax = lattice.cutoff() as i64;
    radii
        .into_iter()
        .filter(|&r| ((r as f64).sqrt().floor() as i64) <= kmax)
        .map(|r| (0..lattice.n_momenta()).filter(|&k| lattice.k_squared(k) <= r).count())
        .collect()
}

fn fermi_radius(lattice: &Lattice, count: usize) -> Result<Option<i64>> {
    if count == 0 {
        return Ok(None);
    }
    for r in 0..=(lattice.dim() as i64 * (lattice.cutoff() as i64).pow(2)) {
        let n = (0..lattice.n_momenta()).filter(|&k| lattice.k_squared(k) <= r).count();
        if n == count && closed_shell_counts(lattice).contains(&n) {
            return Ok(Some(r));
        }
        if n > count {
            break;
        }
    }
    Err(Error::Config(format!(
        "{count} particles per spin is not a closed shell; admissible counts: {:?}",
        closed_shell_counts(lattice)
    )))
}

/// Free Fermi gas: indicator of the Fermi ball per spin.
pub fn ffg_symbol(lattice: &Lattice) -> Result<TiSymbol> {
    let s = lattice.spins();
    let mut omega_hat = vec![0.0; lattice.n_modes()];
    for (sigma, &count) in lattice.n_sigma().iter().enumerate() {
        if let Some(r) = fermi_radius(lattice, count)? {
            for k in 0..lattice.n_momenta() {
                if lattice.k_squared(k) <= r {
                    omega_hat[k * s + sigma] = 1.0;
                }
            }
        }
    }
    TiSymbol::new(lattice, omega_hat, vec![Complex64::new(0.0, 0.0); lattice.n_momenta()])
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ChemicalPotential {
    pub mu: f64,
    pub k_f: f64,
}

/// (k_F)² halfway between the highest occupied and lowest empty |k|².
pub fn chemical_potentials(lattice: &Lattice) -> Result<Vec<ChemicalPotential>> {
    let mut radii: Vec<i64> = (0..lattice.n_momenta()).map(|k| lattice.k_squared(k)).collect();
    radii.sort_unstable();
    radii.dedup();
    lattice
        .n_sigma()
        .iter()
        .map(|&count| {
            let occ = fermi_radius(lattice, count)?;
            let lo = occ.map_or(-1.0, |r| r as f64);
            let hi = radii.iter().find(|&&r| occ.is_none_or(|o| r > o)).map_or(lo + 1.0, |&r| r as f64);
            let kf2 = 0.5 * (lo + hi).max(0.0);
            let e = lattice.eps();
            Ok(ChemicalPotential { mu: e * e * kf2, k_f: kf2.sqrt() })
        })
        .collect()
}

fn check_even(lattice: &Lattice, profile: &[f64]) -> Result<()> {
    for k in 0..lattice.n_momenta() {
        let minus: Vec<i32> = lattice.momentum(k).iter().map(|c| -c).collect();
        let mk = lattice.k_index(&minus).expect("window is symmetric");
        if (profile[k] - profile[mk]).abs() > 1e-12 {
            return Err(Error::Config(format!("profile is not even at k = {:?}", lattice.momentum(k))));
        }
    }
    Ok(())
}

/// Paired state with ω̂(k,σ) = λ(k) and α̂(k) = √(λ(k)(1-λ(k))).
pub fn lambda_state(lattice: &Lattice, profile: &[f64]) -> Result<(TiSymbol, QuasiFree)> {
    if lattice.spins() != 2 {
        return Err(Error::Config("the paired state needs two spin states".into()));
    }
    if profile.len() != lattice.n_momenta() {
        return Err(Error::Dimension(format!("profile has {} entries, lattice {} momenta", profile.len(), lattice.n_momenta())));
    }
    if let Some(x) = profile.iter().find(|x| !(**x >= 0.0 && **x <= 1.0)) {
        return Err(Error::Config(format!("profile value {x} outside [0, 1]")));
    }
    check_even(lattice, profile)?;
    let sum: f64 = profile.iter().sum();
    for (sigma, &n) in lattice.n_sigma().iter().enumerate() {
        if (sum - n as f64).abs() > 1e-9 {
            return Err(Error::Config(format!("profile sums to {sum}, spin {sigma} holds {n} particles")));
        }
    }
    let mut omega_hat = vec![0.0; lattice.n_modes()];
    for (k, &x) in profile.iter().enumerate() {
        omega_hat[2 * k + UP] = x;
        omega_hat[2 * k + DOWN] = x;
    }
    let alpha_hat = profile.iter().map(|&x| Complex64::new((x * (1.0 - x)).max(0.0).sqrt(), 0.0)).collect();
    let sym = TiSymbol::new(lattice, omega_hat, alpha_hat)?;
    let g = sym.assemble();
    Ok((sym, g))
}

/// λ(k) = f(|k| - m) with f = 1 below -C, 0 above C and
/// ½(1 - sin(πξ/2C)) in between; m is fixed by Σλ = `count`.
pub fn smooth_shell_profile(lattice: &Lattice, count: usize, width: f64) -> Result<Vec<f64>> {
    if !(width > 0.0) {
        return Err(Error::Config(format!("shell width must be positive, got {width}")));
    }
    if count >= lattice.n_momenta() {
        return Err(Error::Config(format!("{count} particles per spin leave no empty momenta")));
    }
    let radius: Vec<f64> = (0..lattice.n_momenta()).map(|k| (lattice.k_squared(k) as f64).sqrt()).collect();
    let profile = |m: f64| -> Vec<f64> {
        radius
            .iter()
            .map(|r| {
                let xi = r - m;
                if xi <= -width {
                    1.0
                } else if xi >= width {
                    0.0
                } else {
                    0.5 * (1.0 - (std::f64::consts::FRAC_PI_2 * xi / width).sin())
                }
            })
            .collect()
    };
    let target = count as f64;
    let (mut lo, mut hi) = (-width, radius.iter().cloned().fold(0.0, f64::max) + width);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if profile(mid).iter().sum::<f64>() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let out = profile(0.5 * (lo + hi));
    let s: f64 = out.iter().sum();
    if (s - target).abs() > 1e-9 {
        return Err(Error::Numerical(format!("shell profile normalization stalled at {s}")));
    }
    Ok(out)
}

/// Σ ε²|k|²ω̂ + N V̂(0)/2 - (1/2N)Σ V̂(p)ω̂(k+p,σ)ω̂(k,σ) + (1/N)Σ V̂(p) conj(α̂(k+p))α̂(k),
/// with N = Σω̂ and momenta restricted to the window.
pub fn hfb_energy_ti(sym: &TiSymbol, v: &Potential) -> f64 {
    let lat = &sym.lattice;
    let s = lat.spins();
    let n = sym.total();
    let kin: f64 = lat.kinetic_diag().iter().zip(&sym.omega_hat).map(|(k, w)| k * w).sum();
    if n == 0.0 {
        return kin;
    }
    let direct = n * v.vhat(&vec![0; lat.dim()]) / 2.0;
    let mut exchange = 0.0;
    let mut pairing = Complex64::new(0.0, 0.0);
    for (p, vp) in v.support() {
        for k in 0..lat.n_momenta() {
            let kp: Vec<i32> = lat.momentum(k).iter().zip(&p).map(|(a, b)| a + b).collect();
            let Some(kp) = lat.k_index(&kp) else { continue };
            for sigma in 0..s {
                exchange += vp * sym.omega_hat[kp * s + sigma] * sym.omega_hat[k * s + sigma];
            }
            if s == 2 {
                pairing += sym.alpha_hat[kp].conj() * sym.alpha_hat[k] * vp;
            }
        }
    }
    kin + direct - exchange / (2.0 * n) + pairing.re / n
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanTrial {
    pub trial: usize,
    pub energy: f64,
    pub gap: f64,
    pub alpha_hs: f64,
    pub is_ffg: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub n: usize,
    pub ffg_energy: f64,
    pub energy_gap_min: f64,
    pub argmin_trial: usize,
    /// Non-FFG trials whose gap is within `zero_tol` of zero.
    pub zero_gap_non_ffg: usize,
    pub zero_tol: f64,
    pub trials: Vec<ScanTrial>,
}

fn water_fill(weights: &[f64], target: f64) -> Vec<f64> {
    let fill = |c: f64| -> f64 { weights.iter().map(|w| (c * w).min(1.0)).sum() };
    let (mut lo, mut hi) = (0.0, 1.0);
    while fill(hi) < target {
        hi *= 2.0;
        if hi > 1e300 {
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fill(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    weights.iter().map(|w| (hi * w).min(1.0)).collect()
}

/// Random pure TI symbol with the lattice's (N_↑, N_↓).
///
/// The |N_↑ - N_↓| excess sits on a symmetric set P of blocks (k↑, -k↓)
/// with occupations (1, 0) or (0, 1). The other blocks share an even
/// λ(k) from a symmetrized exponential draw, water-filled to the minority
/// count, with uniformly random pairing phases. Half of the draws keep
/// the FFG polarized set and blend λ with the FFG profile.
pub fn random_ti_symbol(lattice: &Lattice, rng: &mut impl Rng) -> Result<TiSymbol> {
    if lattice.spins() != 2 {
        return Err(Error::Config("random TI symbols need two spin states".into()));
    }
    let nk = lattice.n_momenta();
    let (nu, nd) = (lattice.n_sigma()[UP], lattice.n_sigma()[DOWN]);
    let (excess, up_major) = if nu >= nd { (nu - nd, true) } else { (nd - nu, false) };
    let minority = nu.min(nd) as f64;
    let partner = |k: usize| -> usize {
        let minus: Vec<i32> = lattice.momentum(k).iter().map(|c| -c).collect();
        lattice.k_index(&minus).expect("window is symmetric")
    };
    let zero = lattice.k_index(&vec![0; lattice.dim()]).expect("origin in window");
    let ffg = ffg_symbol(lattice).ok();
    // Blocks k are labelled by the up-leg momentum.
    let ffg_block = |f: &TiSymbol, k: usize| (f.omega_hat[2 * k + UP], f.omega_hat[2 * partner(k) + DOWN]);
    let near_ffg = ffg.is_some() && rng.random::<f64>() < 0.5;
    let mut polarized = vec![false; nk];
    if near_ffg {
        let f = ffg.as_ref().unwrap();
        for (k, slot) in polarized.iter_mut().enumerate() {
            let (a, b) = ffg_block(f, k);
            *slot = a != b;
        }
    } else {
        if excess % 2 == 1 {
            polarized[zero] = true;
        }
        let mut classes: Vec<usize> = (0..nk).filter(|&k| k != zero && k < partner(k)).collect();
        for _ in 0..excess / 2 {
            if classes.is_empty() {
                return Err(Error::Config("spin imbalance exceeds the momentum window".into()));
            }
            let k = classes.swap_remove(rng.random_range(0..classes.len()));
            polarized[k] = true;
            polarized[partner(k)] = true;
        }
    }
    let free: Vec<usize> = (0..nk).filter(|&k| !polarized[k]).collect();
    if (free.len() as f64) < minority {
        return Err(Error::Config("not enough momenta for the paired part".into()));
    }
    let mut raw = vec![0.0; nk];
    for &k in &free {
        raw[k] = rng.sample::<f64, _>(Exp1);
    }
    let weights: Vec<f64> = free.iter().map(|&k| 0.5 * (raw[k] + raw[partner(k)])).collect();
    let mut lambda = vec![0.0; nk];
    for (&k, x) in free.iter().zip(water_fill(&weights, minority)) {
        lambda[k] = x;
    }
    if near_ffg {
        let f = ffg.as_ref().unwrap();
        let tau = 10f64.powf(-3.0 * rng.random::<f64>());
        for &k in &free {
            lambda[k] = (1.0 - tau) * ffg_block(f, k).0 + tau * lambda[k];
        }
    }
    let mut omega_hat = vec![0.0; lattice.n_modes()];
    let mut alpha_hat = vec![Complex64::new(0.0, 0.0); nk];
    for k in 0..nk {
        let (a, b) = if polarized[k] {
            if up_major {
                (1.0, 0.0)
            } else {
                (0.0, 1.0)
            }
        } else {
            (lambda[k], lambda[k])
        };
        omega_hat[2 * k + UP] = a;
        omega_hat[2 * partner(k) + DOWN] = b;
        if !polarized[k] {
            let amp = (lambda[k] * (1.0 - lambda[k])).max(0.0).sqrt();
            alpha_hat[k] = Complex64::from_polar(amp, 2.0 * std::f64::consts::PI * rng.random::<f64>());
        }
    }
    TiSymbol::new(lattice, omega_hat, alpha_hat)
}

/// Energies of `trials` TI symbols against the FFG. Trial 0 is the FFG
/// itself; trial `i > 0` draws from ChaCha8 stream `i` of `seed`, so
/// results do not depend on threading.
pub fn ground_state_scan(lattice: &Lattice, v: &Potential, trials: usize, seed: u64) -> Result<ScanReport> {
    let ffg = ffg_symbol(lattice)?;
    let e_ffg = hfb_energy_ti(&ffg, v);
    let zero_tol = 1e-9;
    let rows: Vec<ScanTrial> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let sym = if trial == 0 { ffg.clone() } else { random_ti_symbol(lattice, &mut rng)? };
            let energy = hfb_energy_ti(&sym, v);
            Ok(ScanTrial {
                trial,
                energy,
                gap: energy - e_ffg,
                alpha_hs: sym.alpha_hat.iter().map(|a| 2.0 * a.norm_sqr()).sum::<f64>().sqrt(),
                is_ffg: sym.is_close(&ffg, 1e-9),
            })
        })
        .collect::<Result<_>>()?;
    let (argmin, min) = rows.iter().fold((0, f64::INFINITY), |acc, r| if r.gap < acc.1 { (r.trial, r.gap) } else { acc });
    Ok(ScanReport {
        n: lattice.n_particles(),
        ffg_energy: e_ffg,
        energy_gap_min: if rows.is_empty() { 0.0 } else { min },
        argmin_trial: argmin,
        zero_gap_non_ffg: rows.iter().filter(|r| !r.is_ffg && r.gap.abs() <= zero_tol).count(),
        zero_tol,
        trials: rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub n: usize,
    pub n_sigma: usize,
    pub alpha_hs_sq_ratio: f64,
    pub grad_alpha_ratio: f64,
    pub s1_ratio: f64,
    /// (E(λ-state) - E(FFG)) / N^{(d-1)/d}.
    pub energy_excess_ratio: f64,
}

/// λ-state family with shell half-width `delta` over closed-shell counts per
/// spin, or the FFG itself when `delta` is None. Ratios use the exponent
/// (d-1)/d; s1² is divided by Nε.
pub fn pairing_bound_check(dim: usize, cutoff: i32, counts: &[usize], delta: Option<f64>, v_of: &(dyn Fn(&Lattice) -> Result<Potential> + Sync)) -> Result<Vec<BoundRow>> {
    counts
        .par_iter()
        .map(|&c| {
            let lat = Lattice::new(dim, cutoff, 2, vec![c, c], None)?;
            let ffg = ffg_symbol(&lat)?;
            let (sym, g) = match delta {
                Some(w) => lambda_state(&lat, &smooth_shell_profile(&lat, c, w)?)?,
                None => (ffg.clone(), ffg.assemble()),
            };
            let n = lat.n_particles() as f64;
            let scale = n.powf((dim as f64 - 1.0) / dim as f64);
            let v = v_of(&lat)?;
            let rep = semiclassical_report(&g, &lat, 0.0)?;
            Ok(BoundRow {
                n: lat.n_particles(),
                n_sigma: c,
                alpha_hs_sq_ratio: g.alpha_hs().powi(2) / scale,
                grad_alpha_ratio: gradient_commutator_hs(&g.alpha, &lat).powi(2) / scale,
                s1_ratio: rep.s1.powi(2) / (n * lat.eps()),
                energy_excess_ratio: (hfb_energy_ti(&sym, &v) - hfb_energy_ti(&ffg, &v)) / scale,
            })
        })
        .collect()
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).filter(|(x, y)| **x > 0.0 && **y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    let m = pts.len() as f64;
    if m < 2.0 {
        return 0.0;
    }
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (xm, ym) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|(x, _)| (x - xm).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - xm) * (y - ym)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        0.0
    }
}

/// Matrix-form HFB energy of the assembled state, for cross-checks.
pub fn assembled_energy(sym: &TiSymbol, v: &Potential) -> Result<f64> {
    let g = sym.assemble();
    HfbModel::new(&sym.lattice, v, g.trace()).energy(&g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{PotentialParams, PotentialRegistry};

    fn attractive(lat: &Lattice) -> Potential {
        PotentialRegistry::default()
            .build("attractive-gaussian", &PotentialParams { v0: 1.0, width: Some(2.0) }, lat)
            .unwrap()
    }

    #[test]
    fn ffg_d1_and_rejects_open_shell() {
        let lat = Lattice::new(1, 2, 2, vec![3, 3], None).unwrap();
        let f = ffg_symbol(&lat).unwrap();
        assert_eq!(f.omega_hat, vec![0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0]);
        let open = Lattice::new(1, 2, 2, vec![2, 2], None).unwrap();
        let err = ffg_symbol(&open).unwrap_err().to_string();
        assert!(err.contains("[1, 3, 5]"), "{err}");
    }

    #[test]
    fn ffg_d3_seven() {
        let lat = Lattice::new(3, 1, 1, vec![7], None).unwrap();
        assert_eq!(ffg_symbol(&lat).unwrap().total(), 7.0);
        assert_eq!(closed_shell_counts(&lat), vec![1, 7, 19, 27]);
    }

    #[test]
    fn lambda_state_half_filling_two_modes() {
        let lat = Lattice::new(1, 1, 2, vec![1, 1], None).unwrap();
        let (sym, g) = lambda_state(&lat, &[0.5, 0.0, 0.5]).unwrap();
        assert!((sym.alpha_hat[0].re - 0.5).abs() < 1e-15);
        assert!(g.purity_residual() < 1e-12);
        assert!((g.trace() - 2.0).abs() < 1e-15);
        assert!(lambda_state(&lat, &[0.7, 0.0, 0.3]).is_err());
        assert!(lambda_state(&lat, &[0.5, 0.5, 0.5]).is_err());
    }

    #[test]
    fn smooth_profile_is_normalized_and_pure() {
        let lat = Lattice::new(1, 8, 2, vec![5, 5], None).unwrap();
        let p = smooth_shell_profile(&lat, 5, 1.0).unwrap();
        assert!((p.iter().sum::<f64>() - 5.0).abs() < 1e-12);
        let (sym, g) = lambda_state(&lat, &p).unwrap();
        assert!(g.purity_residual() < 1e-12);
        assert!(sym.symbol_purity_residual() < 1e-12);
    }

    #[test]
    fn energy_matches_matrix_form() {
        let lat = Lattice::new(1, 3, 2, vec![3, 1], None).unwrap();
        let v = attractive(&lat);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let sym = random_ti_symbol(&lat, &mut rng).unwrap();
            let g = sym.assemble();
            assert!(g.purity_residual() < 1e-12);
            assert!((sym.spin_count(UP) - 3.0).abs() < 1e-9 && (sym.spin_count(DOWN) - 1.0).abs() < 1e-9);
            assert!((hfb_energy_ti(&sym, &v) - assembled_energy(&sym, &v).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn chemical_potential_halfway() {
        let lat = Lattice::new(1, 3, 2, vec![3, 1], Some(1.0)).unwrap();
        let mu = chemical_potentials(&lat).unwrap();
        assert!((mu[0].k_f.powi(2) - 2.5).abs() < 1e-15);
        assert!((mu[1].k_f.powi(2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn scan_is_deterministic() {
        let lat = Lattice::new(1, 3, 2, vec![3, 1], None).unwrap();
        let v = attractive(&lat);
        let a = ground_state_scan(&lat, &v, 16, 3).unwrap();
        let b = ground_state_scan(&lat, &v, 16, 3).unwrap();
        assert_eq!(a.energy_gap_min, b.energy_gap_min);
        assert!(a.trials.iter().zip(&b.trials).all(|(x, y)| x.energy == y.energy));
        assert!(a.trials[0].is_ffg && a.trials[0].gap == 0.0);
        let one = ground_state_scan(&lat, &v, 1, 3).unwrap();
        assert_eq!(one.energy_gap_min, 0.0);
    }
}
