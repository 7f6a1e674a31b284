//! Momentum modes on a d-dimensional torus of side 2π, with spin.
//!
//! Modes are flattened row-major over `(k_1, ..., k_d, sigma)`, so the
//! flat index is `k_index * S + sigma` where `k_index` enumerates
//! `{-K..K}^d` with the last component fastest.

use crate::error::{Error, Result};
use crate::CMat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    dim: usize,
    cutoff: i32,
    spins: usize,
    eps: f64,
    n_sigma: Vec<usize>,
    momenta: Vec<i32>,
}

/// A single-particle mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeIndex {
    pub k: Vec<i32>,
    pub sigma: usize,
    pub flat: usize,
}

impl Lattice {
    /// Build a lattice. `eps = None` selects `N^{-1/d}`.
    pub fn new(dim: usize, cutoff: i32, spins: usize, n_sigma: Vec<usize>, eps: Option<f64>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Config(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if cutoff < 0 {
            return Err(Error::Config(format!("cutoff must be non-negative, got {cutoff}")));
        }
        if !(1..=2).contains(&spins) {
            return Err(Error::Config(format!("spin count must be 1 or 2, got {spins}")));
        }
        if n_sigma.len() != spins {
            return Err(Error::Config(format!(
                "expected {spins} particle counts, got {}",
                n_sigma.len()
            )));
        }
        let side = (2 * cutoff + 1) as usize;
        let nk = side.pow(dim as u32);
        let n: usize = n_sigma.iter().sum();
        if n == 0 || n > nk * spins {
            return Err(Error::Config(format!("particle number {n} outside 1..={}", nk * spins)));
        }
        if n_sigma.iter().any(|&m| m > nk) {
            return Err(Error::Config("more particles of one spin than momentum modes".into()));
        }
        let eps = match eps {
            Some(e) if e > 0.0 && e.is_finite() => e,
            Some(e) => return Err(Error::Config(format!("epsilon must be positive, got {e}"))),
            None => (n as f64).powf(-1.0 / dim as f64),
        };
        let mut momenta = Vec::with_capacity(nk * dim);
        for idx in 0..nk {
            let mut rem = idx;
            let mut k = vec![0i32; dim];
            for c in (0..dim).rev() {
                k[c] = (rem % side) as i32 - cutoff;
                rem /= side;
            }
            momenta.extend_from_slice(&k);
        }
        Ok(Lattice { dim, cutoff, spins, eps, n_sigma, momenta })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn spins(&self) -> usize {
        self.spins
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn n_sigma(&self) -> &[usize] {
        &self.n_sigma
    }

    pub fn n_particles(&self) -> usize {
        self.n_sigma.iter().sum()
    }

    /// Same lattice with a different epsilon.
    pub fn with_eps(&self, eps: f64) -> Self {
        Lattice { eps, ..self.clone() }
    }

    fn side(&self) -> usize {
        (2 * self.cutoff + 1) as usize
    }

    pub fn n_momenta(&self) -> usize {
        self.side().pow(self.dim as u32)
    }

    /// Total number of single-particle modes L.
    pub fn n_modes(&self) -> usize {
        self.n_momenta() * self.spins
    }

    pub fn momentum(&self, k_index: usize) -> &[i32] {
        &self.momenta[k_index * self.dim..(k_index + 1) * self.dim]
    }

    pub fn k_index(&self, k: &[i32]) -> Option<usize> {
        let side = self.side();
        let mut idx = 0usize;
        for &c in k {
            if c.abs() > self.cutoff {
                return None;
            }
            idx = idx * side + (c + self.cutoff) as usize;
        }
        Some(idx)
    }

    pub fn mode(&self, k: &[i32], sigma: usize) -> Option<usize> {
        if sigma >= self.spins {
            return None;
        }
        self.k_index(k).map(|i| i * self.spins + sigma)
    }

    pub fn mode_index(&self, flat: usize) -> ModeIndex {
        let k = self.momentum(flat / self.spins).to_vec();
        ModeIndex { k, sigma: flat % self.spins, flat }
    }

    pub fn k_squared(&self, k_index: usize) -> i64 {
        self.momentum(k_index).iter().map(|&c| (c as i64) * (c as i64)).sum()
    }

    /// Mode reached from `mode` by adding `p` to its momentum.
    pub fn shifted(&self, mode: usize, p: &[i32]) -> Option<usize> {
        let k = self.momentum(mode / self.spins);
        let side = self.side();
        let mut idx = 0usize;
        for (c, dp) in k.iter().zip(p) {
            let q = c + dp;
            if q.abs() > self.cutoff {
                return None;
            }
            idx = idx * side + (q + self.cutoff) as usize;
        }
        Some(idx * self.spins + mode % self.spins)
    }

    /// Target of every column under the truncated shift by `p`.
    pub fn shift_map(&self, p: &[i32]) -> Vec<Option<usize>> {
        (0..self.n_modes()).map(|m| self.shifted(m, p)).collect()
    }

    /// Diagonal of the kinetic symbol, eps^2 |k|^2 per mode.
    pub fn kinetic_diag(&self) -> Vec<f64> {
        let e2 = self.eps * self.eps;
        (0..self.n_modes())
            .map(|m| e2 * self.k_squared(m / self.spins) as f64)
            .collect()
    }

    pub fn kinetic(&self) -> CMat {
        CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            self.n_modes(),
            self.kinetic_diag().into_iter().map(Complex64::from),
        ))
    }

    /// Truncated shift S_p: column (k, s) goes to row (k + p, s) when in range.
    pub fn shift(&self, p: &[i32]) -> CMat {
        let l = self.n_modes();
        let mut s = CMat::zeros(l, l);
        for (col, row) in self.shift_map(p).into_iter().enumerate() {
            if let Some(r) = row {
                s[(r, col)] = Complex64::new(1.0, 0.0);
            }
        }
        s
    }

    /// Fraction of columns that the shift by `p` keeps.
    pub fn fill_factor(&self, p: &[i32]) -> f64 {
        let kept = self.shift_map(p).iter().filter(|r| r.is_some()).count();
        kept as f64 / self.n_modes() as f64
    }

    /// Dual lattice {-2K..2K}^d, row-major.
    pub fn dual_vectors(&self) -> Vec<Vec<i32>> {
        let side = (4 * self.cutoff + 1) as usize;
        let total = side.pow(self.dim as u32);
        (0..total)
            .map(|mut idx| {
                let mut p = vec![0i32; self.dim];
                for c in (0..self.dim).rev() {
                    p[c] = (idx % side) as i32 - 2 * self.cutoff;
                    idx /= side;
                }
                p
            })
            .collect()
    }

    /// Per-mode momentum component `c` times eps, the symbol of -i eps d/dx_c.
    pub fn eps_momentum(&self, c: usize) -> Vec<f64> {
        (0..self.n_modes())
            .map(|m| self.eps * self.momentum(m / self.spins)[c] as f64)
            .collect()
    }

    /// Projector onto spin `sigma`.
    pub fn spin_projector(&self, sigma: usize) -> CMat {
        let l = self.n_modes();
        CMat::from_fn(l, l, |i, j| {
            if i == j && i % self.spins == sigma {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

pub fn norm(p: &[i32]) -> f64 {
    (p.iter().map(|&c| (c as f64) * (c as f64)).sum::<f64>()).sqrt()
}
