//! Time-dependent Hartree-Fock-Bogoliubov dynamics of fermionic quasi-free
//! states on a momentum torus, with an exact Fock-space oracle.

pub mod diagnostics;
pub mod error;
pub mod fock;
pub mod hfb;
pub mod initial;
pub mod lattice;
pub mod linalg;
pub mod potential;
pub mod quasifree;
pub mod ti_torus;

pub use error::{Error, Result};

/// Dense complex matrix over the flattened single-particle index.
pub type CMat = nalgebra::DMatrix<num_complex::Complex64>;
