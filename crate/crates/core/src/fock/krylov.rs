//! exp(-i τ H) ψ by Lanczos with adaptive substeps.

use super::sparse::SparseOp;
use super::space::{inner, norm};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug)]
pub struct KrylovOptions {
    /// Error budget for the whole interval, in vector norm.
    pub tol: f64,
    pub max_dim: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions { tol: 1e-10, max_dim: 30 }
    }
}

/// exp(-i tau H) psi for Hermitian H.
pub fn expm_apply(h: &SparseOp, psi: &[Complex64], tau: f64, opts: KrylovOptions) -> Result<Vec<Complex64>> {
    let mut w = psi.to_vec();
    if tau == 0.0 {
        return Ok(w);
    }
    let total = tau.abs();
    let sign = tau.signum();
    let mut done = 0.0;
    let mut steps = 0usize;
    while done < total {
        steps += 1;
        if steps > 100_000 {
            return Err(Error::Numerical("Krylov propagation did not finish".into()));
        }
        let beta0 = norm(&w);
        if beta0 == 0.0 {
            return Ok(w);
        }
        let (basis, alpha, beta, breakdown) = lanczos(h, &w, beta0, opts.max_dim);
        let m = alpha.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = t.symmetric_eigen();
        let coeffs = |dt: f64| -> Vec<Complex64> {
            (0..m)
                .map(|r| {
                    (0..m)
                        .map(|k| {
                            let phase = Complex64::new(0.0, -sign * dt * eig.eigenvalues[k]).exp();
                            phase * eig.eigenvectors[(r, k)] * eig.eigenvectors[(0, k)]
                        })
                        .sum::<Complex64>()
                        * beta0
                })
                .collect()
        };
        let remaining = total - done;
        let mut dt = remaining;
        let y = loop {
            let y = coeffs(dt);
            if breakdown {
                break y;
            }
            let err = beta[m - 1] * y[m - 1].norm();
            if err <= opts.tol * dt / total || dt < 1e-14 * total {
                break y;
            }
            dt *= 0.5;
        };
        w = (0..w.len())
            .into_par_iter()
            .map(|i| basis.iter().zip(&y).map(|(v, c)| v[i] * c).sum())
            .collect();
        done += dt;
        if remaining - dt <= 1e-15 * total {
            break;
        }
    }
    Ok(w)
}

/// Lanczos with full reorthogonalization. Returns the basis, the diagonal,
/// the off-diagonal (the last entry couples to the next, unbuilt vector),
/// and whether an invariant subspace was hit.
fn lanczos(h: &SparseOp, w: &[Complex64], beta0: f64, max_dim: usize) -> (Vec<Vec<Complex64>>, Vec<f64>, Vec<f64>, bool) {
    let scale = h.gershgorin_bound().max(1e-300);
    let mut basis: Vec<Vec<Complex64>> = vec![w.iter().map(|x| x / beta0).collect()];
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    loop {
        let v = basis.last().unwrap();
        let mut r = h.apply(v);
        let a = inner(v, &r).re;
        alpha.push(a);
        for _ in 0..2 {
            for b in &basis {
                let o = inner(b, &r);
                r.par_iter_mut().zip(b.par_iter()).for_each(|(x, y)| *x -= y * o);
            }
        }
        let nb = norm(&r);
        beta.push(nb);
        if nb < 1e-13 * scale {
            return (basis, alpha, beta, true);
        }
        if basis.len() >= max_dim {
            return (basis, alpha, beta, false);
        }
        basis.push(r.into_iter().map(|x| x / nb).collect());
    }
}
