//! Correlation functions of quasi-free states by the Wick rule.

use super::state::QuasiFree;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Op {
    pub dagger: bool,
    pub mode: usize,
}

impl Op {
    pub fn create(mode: usize) -> Self {
        Op { dagger: true, mode }
    }

    pub fn annihilate(mode: usize) -> Self {
        Op { dagger: false, mode }
    }

    pub fn adjoint(self) -> Self {
        Op { dagger: !self.dagger, mode: self.mode }
    }
}

/// ⟨left right⟩ in the state `g`.
pub fn two_point(g: &QuasiFree, left: Op, right: Op) -> Complex64 {
    let (x, y) = (left.mode, right.mode);
    match (left.dagger, right.dagger) {
        // ⟨a*_x a_y⟩ = ω(y;x)
        (true, false) => g.omega[(y, x)],
        // ⟨a_x a_y⟩ = α(y;x)
        (false, false) => g.alpha[(y, x)],
        // ⟨a_x a*_y⟩ = δ - ω(x;y)
        (false, true) => {
            let d = if x == y { 1.0 } else { 0.0 };
            Complex64::new(d, 0.0) - g.omega[(x, y)]
        }
        // ⟨a*_x a*_y⟩ = conj α(x;y)
        (true, true) => g.alpha[(x, y)].conj(),
    }
}

/// ⟨ops[0] ops[1] ... ops[n-1]⟩, summed over all pairings.
pub fn wick(g: &QuasiFree, ops: &[Op]) -> Result<Complex64> {
    if ops.len() % 2 != 0 {
        return Err(Error::Config(format!("Wick rule needs an even number of operators, got {}", ops.len())));
    }
    if let Some(op) = ops.iter().find(|o| o.mode >= g.dim()) {
        return Err(Error::Dimension(format!("mode {} out of range {}", op.mode, g.dim())));
    }
    let mut buf = ops.to_vec();
    Ok(pairings(g, &mut buf))
}

fn pairings(g: &QuasiFree, ops: &mut Vec<Op>) -> Complex64 {
    if ops.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    let first = ops[0];
    let mut total = Complex64::new(0.0, 0.0);
    for m in 1..ops.len() {
        let t = two_point(g, first, ops[m]);
        if t == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut rest: Vec<Op> = ops[1..m].iter().chain(&ops[m + 1..]).copied().collect();
        let sign = if (m - 1) % 2 == 0 { 1.0 } else { -1.0 };
        total += t * sign * pairings(g, &mut rest);
    }
    total
}

/// Dense k-particle density tensor, `T[x_1..x_k, y_1..y_k] =
/// ⟨a*_{y_1}..a*_{y_k} a_{x_k}..a_{x_1}⟩`, row-major over (x, y).
pub fn kparticle_rdm(g: &QuasiFree, k: usize) -> Result<Vec<Complex64>> {
    if k == 0 || k > 3 {
        return Err(Error::Guard(format!("k-particle density supported for k in 1..=3, got {k}")));
    }
    let l = g.dim();
    let total = l.pow(2 * k as u32);
    let out = (0..total)
        .map(|flat| {
            let idx = unflatten(flat, l, 2 * k);
            let (xs, ys) = idx.split_at(k);
            let mut ops: Vec<Op> = ys.iter().map(|&y| Op::create(y)).collect();
            ops.extend(xs.iter().rev().map(|&x| Op::annihilate(x)));
            pairings(g, &mut ops)
        })
        .collect();
    Ok(out)
}

pub fn unflatten(mut flat: usize, base: usize, len: usize) -> Vec<usize> {
    let mut idx = vec![0; len];
    for slot in (0..len).rev() {
        idx[slot] = flat % base;
        flat /= base;
    }
    idx
}
