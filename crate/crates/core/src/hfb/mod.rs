//! Time-dependent HFB equations and their HF and HB reductions.

pub mod evolve;
pub mod integrator;
pub mod mean_field;

pub use evolve::{evolve, model_for, EvolveOptions, LogRow, Trajectory};
pub use integrator::{Integrator, IntegratorRegistry, Rk4, StepOutcome, UnitaryMidpoint};
pub use mean_field::{EnergyParts, HfbModel, MeanFieldFlags, MeanFieldTerms, Variant};
