use crate::error::{Error, Result};
use crate::quasifree::Op;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest mode count for full-space dense vectors.
pub const DENSE_GUARD: usize = 16;
/// Largest mode count accepted anywhere.
pub const MAX_MODES: usize = 20;

/// Fermionic sign convention on occupation bitstrings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignRule {
    /// a_b |n⟩ = (-1)^{#occupied below b} n_b |n - e_b⟩.
    #[default]
    JordanWigner,
    /// Creators lose the parity string. Breaks the CAR; used to check that
    /// the test suites notice.
    CreatorStringDropped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockSpace {
    n_modes: usize,
    rule: SignRule,
}

impl FockSpace {
    pub fn new(n_modes: usize) -> Result<Self> {
        Self::with_guard(n_modes, DENSE_GUARD)
    }

    pub fn with_guard(n_modes: usize, guard: usize) -> Result<Self> {
        let guard = guard.min(MAX_MODES);
        if n_modes > guard {
            return Err(Error::Guard(format!(
                "{n_modes} modes exceed the Fock-space guard of {guard}; reduce K or S"
            )));
        }
        Ok(FockSpace { n_modes, rule: SignRule::JordanWigner })
    }

    pub fn with_rule(self, rule: SignRule) -> Self {
        FockSpace { rule, ..self }
    }

    pub fn rule(&self) -> SignRule {
        self.rule
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_modes
    }

    #[inline]
    fn string(n: usize, b: usize) -> f64 {
        if (n & ((1usize << b) - 1)).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// a_b |n⟩ as (target, sign).
    #[inline]
    pub fn annihilate(&self, b: usize, n: usize) -> Option<(usize, f64)> {
        if n & (1 << b) == 0 {
            return None;
        }
        Some((n ^ (1 << b), Self::string(n, b)))
    }

    /// a*_b |n⟩ as (target, sign).
    #[inline]
    pub fn create(&self, b: usize, n: usize) -> Option<(usize, f64)> {
        if n & (1 << b) != 0 {
            return None;
        }
        let s = match self.rule {
            SignRule::JordanWigner => Self::string(n, b),
            SignRule::CreatorStringDropped => 1.0,
        };
        Some((n | (1 << b), s))
    }

    #[inline]
    pub fn act(&self, op: Op, n: usize) -> Option<(usize, f64)> {
        if op.dagger {
            self.create(op.mode, n)
        } else {
            self.annihilate(op.mode, n)
        }
    }

    pub fn apply(&self, op: Op, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for (n, &a) in psi.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            if let Some((m, s)) = self.act(op, n) {
                out[m] += a * s;
            }
        }
        out
    }

    /// ops[0] ops[1] ... ops[k-1] ψ, rightmost operator first.
    pub fn apply_ops(&self, ops: &[Op], psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        'basis: for (n, &a) in psi.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (mut m, mut s) = (n, 1.0);
            for op in ops.iter().rev() {
                match self.act(*op, m) {
                    Some((m2, s2)) => {
                        m = m2;
                        s *= s2;
                    }
                    None => continue 'basis,
                }
            }
            out[m] += a * s;
        }
        out
    }

    /// ⟨ψ, ops ψ⟩.
    pub fn expectation(&self, ops: &[Op], psi: &[Complex64]) -> Complex64 {
        inner(psi, &self.apply_ops(ops, psi))
    }

    pub fn vacuum(&self) -> FockVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim()];
        amps[0] = Complex64::new(1.0, 0.0);
        FockVector { amps }
    }

    pub fn basis_state(&self, n: usize) -> FockVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim()];
        amps[n] = Complex64::new(1.0, 0.0);
        FockVector { amps }
    }

    /// ⟨ψ, (N + 1)^k ψ⟩.
    pub fn number_moment(&self, psi: &[Complex64], k: u32) -> f64 {
        psi.iter()
            .enumerate()
            .map(|(n, a)| a.norm_sqr() * ((n.count_ones() + 1) as f64).powi(k as i32))
            .sum()
    }

    /// Multiply each amplitude by f(popcount).
    pub fn number_function(&self, psi: &[Complex64], f: impl Fn(f64) -> f64 + Sync) -> Vec<Complex64> {
        psi.par_iter().enumerate().map(|(n, a)| a * f(n.count_ones() as f64)).collect()
    }
}

/// ⟨a, b⟩, antilinear in the first slot.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    pub amps: Vec<Complex64>,
}

impl FockVector {
    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    /// Bitstring to (re, im), dropping amplitudes below 1e-14.
    pub fn to_snapshot(&self, n_modes: usize) -> BTreeMap<String, [f64; 2]> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() >= 1e-14)
            .map(|(n, a)| (format!("{:0width$b}", n, width = n_modes), [a.re, a.im]))
            .collect()
    }
}
