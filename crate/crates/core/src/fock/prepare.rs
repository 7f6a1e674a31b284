//! Elementary Bogoliubov factors as Fock-space unitaries.

use super::space::{FockSpace, FockVector};
use crate::error::{Error, Result};
use crate::quasifree::{BogoliubovMap, Factor};
use num_complex::Complex64;
use rayon::prelude::*;

fn bit(n: usize, i: usize) -> bool {
    n & (1 << i) != 0
}

/// Apply one factor, or its inverse, to ψ.
pub fn apply_factor(space: &FockSpace, f: &Factor, psi: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let sgn = if inverse { -1.0 } else { 1.0 };
    match *f {
        Factor::Phase { i, phi } => {
            let e = Complex64::from_polar(1.0, sgn * phi);
            psi.par_iter().enumerate().map(|(n, a)| if bit(n, i) { a * e } else { *a }).collect()
        }
        Factor::Givens { i, j, theta, phi } => {
            // exp(θX) = 1 - P + P cos θ + X sin θ, X = e^{iφ} a*_i a_j - h.c.,
            // P projecting onto n_i + n_j = 1.
            let (s, c) = (sgn * theta).sin_cos();
            let e = Complex64::from_polar(1.0, phi);
            let mut out = psi.to_vec();
            for (n, &a) in psi.iter().enumerate() {
                if a == Complex64::new(0.0, 0.0) || bit(n, i) == bit(n, j) {
                    continue;
                }
                out[n] += a * (c - 1.0);
                let (from, to, coef) = if bit(n, j) { (j, i, e) } else { (i, j, -e.conj()) };
                let (m1, s1) = space.annihilate(from, n).expect("occupied");
                let (m2, s2) = space.create(to, m1).expect("empty");
                out[m2] += a * coef * (s * s1 * s2);
            }
            out
        }
        Factor::Pair { i, j, theta } => {
            // exp(θY) = 1 - Q + Q cos θ + Y sin θ, Y = a*_i a*_j - a_j a_i,
            // Q projecting onto n_i = n_j.
            let (s, c) = (sgn * theta).sin_cos();
            let mut out = psi.to_vec();
            for (n, &a) in psi.iter().enumerate() {
                if a == Complex64::new(0.0, 0.0) || bit(n, i) != bit(n, j) {
                    continue;
                }
                out[n] += a * (c - 1.0);
                if bit(n, i) {
                    let (m1, s1) = space.annihilate(i, n).expect("occupied");
                    let (m2, s2) = space.annihilate(j, m1).expect("occupied");
                    out[m2] -= a * (s * s1 * s2);
                } else {
                    let (m1, s1) = space.create(j, n).expect("empty");
                    let (m2, s2) = space.create(i, m1).expect("empty");
                    out[m2] += a * (s * s1 * s2);
                }
            }
            out
        }
        Factor::ParticleHole { k } => {
            // F = W P with W = a_k + a*_k and P = (-1)^{N - n_k}; F* = P W.
            let parity = |n: usize| {
                let others = (n & !(1 << k)).count_ones();
                if others % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            };
            let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
            for (n, &a) in psi.iter().enumerate() {
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let (m, s) = space.annihilate(k, n).or_else(|| space.create(k, n)).expect("one applies");
                let p = if inverse { parity(m) } else { parity(n) };
                out[m] += a * (s * p);
            }
            out
        }
    }
}

/// R ψ for R = F_1 ... F_n.
pub fn apply_map(space: &FockSpace, factors: &[Factor], psi: &[Complex64]) -> Vec<Complex64> {
    factors.iter().rev().fold(psi.to_vec(), |acc, f| apply_factor(space, f, &acc, false))
}

/// R* ψ.
pub fn apply_map_adjoint(space: &FockSpace, factors: &[Factor], psi: &[Complex64]) -> Vec<Complex64> {
    factors.iter().fold(psi.to_vec(), |acc, f| apply_factor(space, f, &acc, true))
}

/// RΩ for the factored map.
pub fn gaussian_prepare(space: &FockSpace, map: &BogoliubovMap) -> Result<FockVector> {
    if map.dim() != space.n_modes() {
        return Err(Error::Dimension(format!("map on {} modes, space has {}", map.dim(), space.n_modes())));
    }
    if map.factors.is_empty() && (map.v.norm() > 0.0 || (&map.u - crate::CMat::identity(map.dim(), map.dim())).norm() > 0.0) {
        return Err(Error::Config("Bogoliubov map has no factored form".into()));
    }
    let mut out = FockVector { amps: apply_map(space, &map.factors, &space.vacuum().amps) };
    out.normalize();
    Ok(out)
}
