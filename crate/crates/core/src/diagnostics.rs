//! Semiclassical commutator norms, their growth envelope, the commutator
//! identity for Bogoliubov blocks, and many-body error kernels.

use crate::error::{Error, Result};
use crate::fock::{correlation_tensor, FockSpace};
use crate::hfb::Trajectory;
use crate::lattice::{norm, Lattice};
use crate::linalg::{commutator_diag, frob};
use crate::quasifree::wick::unflatten;
use crate::quasifree::{wick, BogoliubovMap, Op, QuasiFree};
use crate::CMat;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct SemiclassicalReport {
    pub t: f64,
    /// max over the finite dual lattice of ‖[ω, S_p]‖_HS / (1 + |p|).
    pub s1: f64,
    /// Shift attaining s1.
    pub s1_p: Vec<i32>,
    pub s2: f64,
    pub s3: f64,
    pub alpha_hs: f64,
}

impl SemiclassicalReport {
    pub fn max_norm(&self) -> f64 {
        self.s1.max(self.s2).max(self.s3)
    }
}

/// ‖[ω, S_p]‖_HS without forming S_p.
pub fn shift_commutator_hs(omega: &CMat, lattice: &Lattice, p: &[i32]) -> f64 {
    let l = lattice.n_modes();
    let plus = lattice.shift_map(p);
    let minus: Vec<i32> = p.iter().map(|c| -c).collect();
    let minus = lattice.shift_map(&minus);
    let zero = Complex64::new(0.0, 0.0);
    let mut acc = 0.0;
    for a in 0..l {
        for b in 0..l {
            // (ωS)(a;b) = ω(a; b+p), (Sω)(a;b) = ω(a-p; b)
            let left = plus[b].map_or(zero, |bp| omega[(a, bp)]);
            let right = minus[a].map_or(zero, |am| omega[(am, b)]);
            acc += (left - right).norm_sqr();
        }
    }
    acc.sqrt()
}

/// HS norm of the vector operator [A, ε∇] = ([A, iεk_c])_c.
pub fn gradient_commutator_hs(a: &CMat, lattice: &Lattice) -> f64 {
    (0..lattice.dim())
        .map(|c| {
            let d: Vec<Complex64> = lattice.eps_momentum(c).into_iter().map(|x| Complex64::new(0.0, x)).collect();
            frob(&commutator_diag(a, &d)).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

pub fn semiclassical_report(g: &QuasiFree, lattice: &Lattice, t: f64) -> Result<SemiclassicalReport> {
    if g.dim() != lattice.n_modes() {
        return Err(Error::Dimension(format!("state on {} modes, lattice has {}", g.dim(), lattice.n_modes())));
    }
    let (s1, s1_p) = lattice
        .dual_vectors()
        .into_par_iter()
        .map(|p| (shift_commutator_hs(&g.omega, lattice, &p) / (1.0 + norm(&p)), p))
        .reduce(|| (0.0, vec![0; lattice.dim()]), |a, b| if b.0 > a.0 { b } else { a });
    Ok(SemiclassicalReport {
        t,
        s1,
        s1_p,
        s2: gradient_commutator_hs(&g.omega, lattice),
        s3: gradient_commutator_hs(&g.alpha, lattice),
        alpha_hs: g.alpha_hs(),
    })
}

pub fn trajectory_reports(traj: &Trajectory, lattice: &Lattice) -> Result<Vec<SemiclassicalReport>> {
    traj.states
        .par_iter()
        .zip(traj.times.par_iter())
        .map(|(g, &t)| semiclassical_report(g, lattice, t))
        .collect()
}

/// Upper envelope C e^{c t} (N^{(d-1)/(2d)} + t ‖α₀‖_HS) of max(s1, s2, s3).
#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeFit {
    pub big_c: f64,
    pub c: f64,
    /// Largest log-excess of the data over the envelope; ≤ 0 up to round-off.
    pub max_violation: f64,
}

/// Least squares in log space for (log C, c), with log C then raised by
/// the largest residual so the envelope bounds every point.
pub fn growth_envelope_fit(reports: &[SemiclassicalReport], n: f64, dim: usize, alpha0_hs: f64) -> Result<EnvelopeFit> {
    if reports.len() < 10 {
        return Err(Error::Config(format!("envelope fit needs at least 10 reports, got {}", reports.len())));
    }
    if reports.iter().all(|r| r.max_norm() == 0.0) {
        return Err(Error::Numerical("all semiclassical norms vanish; nothing to fit".into()));
    }
    let base = n.powf((dim as f64 - 1.0) / (2.0 * dim as f64));
    let pts: Vec<(f64, f64)> = reports
        .iter()
        .filter(|r| r.max_norm() > 0.0)
        .map(|r| (r.t.abs(), r.max_norm().ln() - (base + r.t.abs() * alpha0_hs).ln()))
        .collect();
    let m = pts.len() as f64;
    let (st, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (t, y)| (a + t, b + y));
    let (tm, ym) = (st / m, sy / m);
    let stt: f64 = pts.iter().map(|(t, _)| (t - tm).powi(2)).sum();
    let sty: f64 = pts.iter().map(|(t, y)| (t - tm) * (y - ym)).sum();
    let c = if stt > 0.0 { sty / stt } else { 0.0 };
    let a = ym - c * tm;
    let shift = pts.iter().map(|(t, y)| y - (a + c * t)).fold(f64::NEG_INFINITY, f64::max);
    let log_c = a + shift.max(0.0);
    let max_violation = pts.iter().map(|(t, y)| y - (log_c + c * t)).fold(f64::NEG_INFINITY, f64::max);
    Ok(EnvelopeFit { big_c: log_c.exp(), c, max_violation })
}

pub fn trajectory_envelope(traj: &Trajectory, lattice: &Lattice) -> Result<EnvelopeFit> {
    let reports = trajectory_reports(traj, lattice)?;
    let g0 = &traj.states[0];
    growth_envelope_fit(&reports, g0.trace(), lattice.dim(), g0.alpha_hs())
}

/// ‖v S u* - (v[ω,S]u* + ū α* S u* - v S α vᵀ)‖_HS for S = S_{-p},
/// restricted to the columns S keeps. Returns (restricted, full).
pub fn subtle_identity_residual(b: &BogoliubovMap, g: &QuasiFree, lattice: &Lattice, p: &[i32]) -> Result<(f64, f64)> {
    let l = lattice.n_modes();
    if b.dim() != l || g.dim() != l {
        return Err(Error::Dimension("map, state and lattice disagree on the mode count".into()));
    }
    let (u, v) = (&b.u, &b.v);
    let mismatch = frob(&(v.adjoint() * v - &g.omega)) + frob(&(v.adjoint() * u.conjugate() - &g.alpha));
    if mismatch > 1e-8 {
        return Err(Error::Config(format!("state is not the one generated by the map (mismatch {mismatch:e})")));
    }
    let minus: Vec<i32> = p.iter().map(|c| -c).collect();
    let s = lattice.shift(&minus);
    let us = u.adjoint();
    let lhs = v * &s * &us;
    let comm = &g.omega * &s - &s * &g.omega;
    let rhs = v * comm * &us + u.conjugate() * g.alpha.adjoint() * &s * &us - v * &s * &g.alpha * v.transpose();
    let diff = lhs - rhs;
    let kept: Vec<usize> = lattice.shift_map(&minus).iter().enumerate().filter_map(|(c, r)| r.map(|_| c)).collect();
    let restricted: f64 = kept.iter().map(|&c| diff.column(c).norm_squared()).sum::<f64>().sqrt();
    Ok((restricted, frob(&diff)))
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorKernelReport {
    pub order: usize,
    pub signature: String,
    pub err_hs: f64,
    pub wick_hs: f64,
    pub ratio: f64,
}

pub fn signature_label(signature: &[bool]) -> String {
    signature.iter().map(|&d| if d { '+' } else { '-' }).collect()
}

/// Tensor of Wick values ⟨A_1 ... A_{2j}⟩, same layout as the oracle tensor.
pub fn wick_tensor(g: &QuasiFree, signature: &[bool]) -> Result<Vec<Complex64>> {
    let l = g.dim();
    let len = signature.len();
    let total = l.pow(len as u32);
    (0..total)
        .into_par_iter()
        .map(|flat| {
            let ops: Vec<Op> = unflatten(flat, l, len)
                .into_iter()
                .zip(signature)
                .map(|(m, &d)| Op { dagger: d, mode: m })
                .collect();
            wick(g, &ops)
        })
        .collect()
}

/// Difference between exact correlations of ψ_t and the Wick values of g_t.
pub fn error_kernel(space: &FockSpace, psi: &[Complex64], g: &QuasiFree, signature: &[bool]) -> Result<ErrorKernelReport> {
    let j = signature.len() / 2;
    if j == 0 || j > 3 || signature.len() % 2 != 0 {
        return Err(Error::Guard(format!("error kernels supported for orders 2, 4, 6; got {}", signature.len())));
    }
    if g.dim() != space.n_modes() {
        return Err(Error::Dimension(format!("state on {} modes, space has {}", g.dim(), space.n_modes())));
    }
    let exact = correlation_tensor(space, psi, signature)?;
    let wick_vals = wick_tensor(g, signature)?;
    let err_hs = exact.iter().zip(&wick_vals).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let wick_hs = wick_vals.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    Ok(ErrorKernelReport {
        order: signature.len(),
        signature: signature_label(signature),
        err_hs,
        wick_hs,
        ratio: if wick_hs > 0.0 { err_hs / wick_hs } else { 0.0 },
    })
}
