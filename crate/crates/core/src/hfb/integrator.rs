//! Time steppers for iε dΓ/dt = [H(Γ), Γ], selected by name.

use super::mean_field::HfbModel;
use crate::error::{Error, Result};
use crate::linalg::{expm_herm, frob};
use crate::quasifree::QuasiFree;
use crate::CMat;
use num_complex::Complex64;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub gamma: CMat,
    pub iterations: usize,
    pub residual: f64,
}

pub trait Integrator: Send + Sync {
    fn name(&self) -> &'static str;
    /// Advance Γ by dt.
    fn step(&self, model: &HfbModel, gamma: &CMat, dt: f64) -> Result<StepOutcome>;
}

fn generator(model: &HfbModel, gamma: &CMat) -> Result<CMat> {
    Ok(model.mean_field(&QuasiFree::from_gamma(gamma))?.generator())
}

fn conjugate(u: &CMat, gamma: &CMat) -> CMat {
    let mut out = u * gamma * u.adjoint();
    // keep Γ exactly Hermitian
    out = (&out + out.adjoint()) * Complex64::new(0.5, 0.0);
    out
}

fn trace_omega(gamma: &CMat) -> f64 {
    let l = gamma.nrows() / 2;
    (0..l).map(|i| gamma[(i, i)].re).sum()
}

/// Rotate Γ along G = i[Q, Γ], Q = diag(1, -1), until tr ω equals `target`.
/// G has generator form with pairing block 2iα, so purity and the block
/// structure survive; the rotation only moves the charge.
pub fn restore_charge(gamma: &CMat, target: f64) -> CMat {
    let l = gamma.nrows() / 2;
    let alpha = gamma.view((0, l), (l, l)).clone_owned();
    let slope = 4.0 * alpha.norm_squared();
    if slope < 1e-24 {
        return gamma.clone();
    }
    let mut g = CMat::zeros(2 * l, 2 * l);
    let two_i = Complex64::new(0.0, 2.0);
    g.view_mut((0, l), (l, l)).copy_from(&(&alpha * two_i));
    g.view_mut((l, 0), (l, l)).copy_from(&(alpha.adjoint() * (-two_i)));
    let mut theta = 0.0;
    let mut out = gamma.clone();
    for _ in 0..4 {
        let miss = trace_omega(&out) - target;
        if miss.abs() < 1e-15 * target.abs().max(1.0) {
            break;
        }
        // d tr ω / dθ = ½‖[Q, Γ]‖² = 4‖α‖² at θ = 0.
        theta -= miss / slope;
        out = conjugate(&expm_herm(&g, Complex64::new(0.0, -theta)), gamma);
    }
    out
}

/// Γ_{n+1} = U Γ_n U* with U = exp(-i dt H(Γ_mid)/ε), Γ_mid = (Γ_n + Γ_{n+1})/2
/// solved by damped fixed-point iteration. With `charge_projection` the
/// result is rotated back onto tr ω = tr ω_n (see [`restore_charge`]).
#[derive(Clone, Copy, Debug)]
pub struct UnitaryMidpoint {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub charge_projection: bool,
}

impl Default for UnitaryMidpoint {
    fn default() -> Self {
        UnitaryMidpoint { damping: 0.5, tol: 1e-12, max_iter: 50, charge_projection: true }
    }
}

impl Integrator for UnitaryMidpoint {
    fn name(&self) -> &'static str {
        "unitary-midpoint"
    }

    fn step(&self, model: &HfbModel, gamma: &CMat, dt: f64) -> Result<StepOutcome> {
        let z = Complex64::new(0.0, -dt / model.eps());
        let propagate = |h: &CMat| conjugate(&expm_herm(h, z), gamma);
        let mut next = propagate(&generator(model, gamma)?);
        let mut residual = f64::INFINITY;
        let scale = frob(gamma).max(1.0);
        for it in 1..=self.max_iter {
            let mid = (gamma + &next) * Complex64::new(0.5, 0.0);
            let cand = propagate(&generator(model, &mid)?);
            residual = frob(&(&cand - &next)) / scale;
            if residual <= self.tol {
                let gamma = if self.charge_projection { restore_charge(&cand, trace_omega(gamma)) } else { cand };
                return Ok(StepOutcome { gamma, iterations: it, residual });
            }
            next = &next * Complex64::new(1.0 - self.damping, 0.0) + cand * Complex64::new(self.damping, 0.0);
        }
        Err(Error::Numerical(format!(
            "midpoint fixed point did not converge in {} iterations (residual {residual:e})",
            self.max_iter
        )))
    }
}

/// Classical fourth-order Runge-Kutta on the entries of Γ.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rk4;

impl Integrator for Rk4 {
    fn name(&self) -> &'static str {
        "rk4"
    }

    fn step(&self, model: &HfbModel, gamma: &CMat, dt: f64) -> Result<StepOutcome> {
        let f = |g: &CMat| model.rhs_block(g);
        let h = Complex64::new(dt, 0.0);
        let half = Complex64::new(dt / 2.0, 0.0);
        let k1 = f(gamma)?;
        let k2 = f(&(gamma + &k1 * half))?;
        let k3 = f(&(gamma + &k2 * half))?;
        let k4 = f(&(gamma + &k3 * h))?;
        let out = gamma + (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4) * (h / 6.0);
        Ok(StepOutcome { gamma: out, iterations: 4, residual: 0.0 })
    }
}

pub struct IntegratorRegistry {
    entries: BTreeMap<&'static str, Box<dyn Integrator>>,
}

impl IntegratorRegistry {
    pub fn empty() -> Self {
        IntegratorRegistry { entries: BTreeMap::new() }
    }

    pub fn register(&mut self, integrator: Box<dyn Integrator>) {
        self.entries.insert(integrator.name(), integrator);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Integrator> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| {
            Error::Config(format!("unknown integrator '{name}' (available: {})", self.names().join(", ")))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for IntegratorRegistry {
    fn default() -> Self {
        let mut r = IntegratorRegistry::empty();
        r.register(Box::new(UnitaryMidpoint::default()));
        r.register(Box::new(Rk4));
        r
    }
}
