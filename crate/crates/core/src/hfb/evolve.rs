use super::integrator::Integrator;
use super::mean_field::{HfbModel, Variant};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::potential::Potential;
use crate::quasifree::{QuasiFree, PURITY_TOL};
use crate::CMat;
use serde::Serialize;

/// Maximum number of dt halvings when the midpoint iteration stalls.
pub const MAX_HALVINGS: u32 = 6;

#[derive(Clone, Debug)]
pub struct EvolveOptions {
    pub t_final: f64,
    /// Defaults to ε/20.
    pub dt: Option<f64>,
    pub variant: Variant,
    /// Log every `stride` steps; the first and last steps are always logged.
    pub stride: usize,
}

impl EvolveOptions {
    pub fn new(t_final: f64, variant: Variant) -> Self {
        EvolveOptions { t_final, dt: None, variant, stride: 1 }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = Some(dt);
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride.max(1);
        self
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LogRow {
    pub t: f64,
    pub trace_omega: f64,
    pub hfb_energy: f64,
    pub purity_residual: f64,
    pub antisymmetry_residual: f64,
    pub alpha_hs_norm: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<QuasiFree>,
    pub log: Vec<LogRow>,
    pub dt: f64,
    pub halvings: usize,
}

impl Trajectory {
    pub fn last(&self) -> &QuasiFree {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn max_trace_drift(&self) -> f64 {
        let t0 = self.log[0].trace_omega;
        self.log.iter().map(|r| (r.trace_omega - t0).abs()).fold(0.0, f64::max)
    }

    pub fn max_purity_residual(&self) -> f64 {
        self.log.iter().map(|r| r.purity_residual).fold(0.0, f64::max)
    }

    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.log[0].hfb_energy;
        self.log.iter().map(|r| (r.hfb_energy - e0).abs()).fold(0.0, f64::max)
    }
}

/// Model with N = tr ω₀ frozen and the variant's flags.
pub fn model_for(lattice: &Lattice, v: &Potential, g0: &QuasiFree, variant: Variant) -> HfbModel {
    HfbModel::new(lattice, v, g0.trace()).with_flags(variant.flags())
}

fn log_row(model: &HfbModel, t: f64, g: &QuasiFree) -> Result<LogRow> {
    Ok(LogRow {
        t,
        trace_omega: g.trace(),
        hfb_energy: model.energy(g)?,
        purity_residual: g.purity_residual(),
        antisymmetry_residual: g.antisymmetry_residual(),
        alpha_hs_norm: g.alpha_hs(),
    })
}

fn step_with_halving(integ: &dyn Integrator, model: &HfbModel, gamma: &CMat, dt: f64, depth: u32, halvings: &mut usize) -> Result<CMat> {
    match integ.step(model, gamma, dt) {
        Ok(out) => Ok(out.gamma),
        Err(Error::Numerical(msg)) => {
            if depth >= MAX_HALVINGS {
                return Err(Error::Numerical(format!("{msg}; gave up after {MAX_HALVINGS} halvings")));
            }
            *halvings += 1;
            let mid = step_with_halving(integ, model, gamma, dt / 2.0, depth + 1, halvings)?;
            step_with_halving(integ, model, &mid, dt / 2.0, depth + 1, halvings)
        }
        Err(e) => Err(e),
    }
}

/// Integrate from g₀ over [0, T]. The step is shrunk so that a whole number
/// of steps lands on T.
pub fn evolve(g0: &QuasiFree, lattice: &Lattice, v: &Potential, opts: &EvolveOptions, integrator: &dyn Integrator) -> Result<Trajectory> {
    if g0.dim() != lattice.n_modes() {
        return Err(Error::Dimension(format!("state on {} modes, lattice has {}", g0.dim(), lattice.n_modes())));
    }
    g0.check_pure(PURITY_TOL)?;
    if opts.variant == Variant::Hf && g0.alpha_hs() > PURITY_TOL {
        return Err(Error::Config(format!(
            "HF variant needs alpha = 0, initial state has ||alpha||_HS = {:e}",
            g0.alpha_hs()
        )));
    }
    if !(opts.t_final >= 0.0) || !opts.t_final.is_finite() {
        return Err(Error::Config(format!("final time must be finite and non-negative, got {}", opts.t_final)));
    }
    let model = model_for(lattice, v, g0, opts.variant);
    let dt_req = opts.dt.unwrap_or(lattice.eps() / 20.0);
    if !(dt_req > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt_req}")));
    }
    let steps = (opts.t_final / dt_req).ceil().max(if opts.t_final > 0.0 { 1.0 } else { 0.0 }) as usize;
    let dt = if steps > 0 { opts.t_final / steps as f64 } else { dt_req };
    let stride = opts.stride.max(1);

    let mut traj = Trajectory { times: vec![0.0], states: vec![g0.clone()], log: vec![log_row(&model, 0.0, g0)?], dt, halvings: 0 };
    let mut gamma = g0.gamma();
    for n in 1..=steps {
        gamma = step_with_halving(integrator, &model, &gamma, dt, 0, &mut traj.halvings)?;
        if n % stride == 0 || n == steps {
            let t = n as f64 * dt;
            let g = QuasiFree::from_gamma(&gamma);
            traj.log.push(log_row(&model, t, &g)?);
            traj.times.push(t);
            traj.states.push(g);
        }
    }
    Ok(traj)
}
