//! Norm estimates for second-quantized one-body and pair operators.

use super::rdm::{dgamma_apply, pair_annihilate, pair_create};
use super::space::{inner, norm, FockSpace};
use crate::linalg::{frob, op_norm, trace_norm};
use crate::CMat;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug)]
pub struct BoundSample {
    pub label: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

impl BoundSample {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs <= self.rhs + slack
    }
}

pub const BOUND_LABELS: [&str; 8] = [
    "|<dG(O)>| <= |O|op <N>",
    "|dG(O)psi| <= |O|op |N psi|",
    "|dG(O)psi| <= |O|hs |N^1/2 psi|",
    "|O aa psi| <= |O|hs |N^1/2 psi|",
    "|O a*a* psi| <= 2|O|hs |(N+1)^1/2 psi|",
    "|dG(O)psi| <= 2|O|tr |psi|",
    "|O aa psi| <= 2|O|tr |psi|",
    "|O a*a* psi| <= 2|O|tr |psi|",
];

fn number_weighted(psi: &[Complex64], f: impl Fn(f64) -> f64) -> f64 {
    psi.iter().enumerate().map(|(n, a)| a.norm_sqr() * f(n.count_ones() as f64)).sum::<f64>().sqrt()
}

/// Both sides of each estimate for one (O, ψ).
pub fn operator_bounds(space: &FockSpace, o: &CMat, psi: &[Complex64]) -> [BoundSample; 8] {
    let (op, hs, tr) = (op_norm(o), frob(o), trace_norm(o));
    let size = norm(psi);
    let n_half = number_weighted(psi, |n| n);
    let n_full = number_weighted(psi, |n| n * n);
    let n_plus = number_weighted(psi, |n| n + 1.0);
    let dg = dgamma_apply(space, o, psi);
    let dg_norm = norm(&dg);
    let aa = norm(&pair_annihilate(space, o, psi));
    let cc = norm(&pair_create(space, o, psi));
    let sides = [
        (inner(psi, &dg).norm(), op * n_half * n_half),
        (dg_norm, op * n_full),
        (dg_norm, hs * n_half),
        (aa, hs * n_half),
        (cc, 2.0 * hs * n_plus),
        (dg_norm, 2.0 * tr * size),
        (aa, 2.0 * tr * size),
        (cc, 2.0 * tr * size),
    ];
    std::array::from_fn(|i| BoundSample { label: BOUND_LABELS[i], lhs: sides[i].0, rhs: sides[i].1 })
}
