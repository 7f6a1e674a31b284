//! Exact many-body oracle on the fermionic Fock space of a few modes.

pub mod bounds;
pub mod hamiltonian;
pub mod krylov;
pub mod prepare;
pub mod rdm;
pub mod space;
pub mod sparse;

pub use bounds::{operator_bounds, BoundSample, BOUND_LABELS};
pub use hamiltonian::build_hamiltonian;
pub use krylov::{expm_apply, KrylovOptions};
pub use prepare::{apply_map, apply_map_adjoint, gaussian_prepare};
pub use rdm::{correlation_tensor, dgamma_apply, pair_annihilate, pair_create, pairing1, rdm1};
pub use space::{inner, norm, FockSpace, FockVector, SignRule};
pub use sparse::{annihilator, creator, number_operator, second_quantize, SparseOp};

use crate::error::{Error, Result};
use num_complex::Complex64;

/// ψ_t = exp(-i H t / ε) ψ.
pub fn evolve_exact(h: &SparseOp, psi: &FockVector, t: f64, eps: f64) -> Result<FockVector> {
    if h.dim() <= 512 && h.hermiticity_residual() > 1e-12 {
        return Err(Error::Numerical("Hamiltonian is not Hermitian".into()));
    }
    let amps = expm_apply(h, &psi.amps, t / eps, KrylovOptions::default())?;
    Ok(FockVector { amps })
}

/// ⟨ψ, H ψ⟩.
pub fn energy(h: &SparseOp, psi: &[Complex64]) -> f64 {
    inner(psi, &h.apply(psi)).re
}
