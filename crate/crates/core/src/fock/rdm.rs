//! Reduced densities and correlation tensors of Fock vectors.

use super::space::{inner, FockSpace};
use crate::error::{Error, Result};
use crate::quasifree::wick::unflatten;
use crate::quasifree::Op;
use crate::CMat;
use num_complex::Complex64;
use rayon::prelude::*;

/// Cap on vectors times dimension held at once for correlation tensors.
pub const TENSOR_BUDGET: usize = 1 << 24;

fn apply_each(space: &FockSpace, psi: &[Complex64], dagger: bool) -> Vec<Vec<Complex64>> {
    (0..space.n_modes())
        .into_par_iter()
        .map(|x| space.apply(Op { dagger, mode: x }, psi))
        .collect()
}

/// γ(x;y) = ⟨ψ, a*_y a_x ψ⟩.
pub fn rdm1(space: &FockSpace, psi: &[Complex64]) -> CMat {
    let ax = apply_each(space, psi, false);
    let l = space.n_modes();
    CMat::from_fn(l, l, |x, y| inner(&ax[y], &ax[x]))
}

/// π(x;y) = ⟨ψ, a_y a_x ψ⟩.
pub fn pairing1(space: &FockSpace, psi: &[Complex64]) -> CMat {
    let ax = apply_each(space, psi, false);
    let ay = apply_each(space, psi, true);
    let l = space.n_modes();
    CMat::from_fn(l, l, |x, y| inner(&ay[y], &ax[x]))
}

/// Tensor of ⟨ψ, A_1 ... A_{2j} ψ⟩ over all mode tuples, where operator
/// `i` is a creator when `signature[i]` is true. Row-major over
/// (x_1, ..., x_{2j}).
pub fn correlation_tensor(space: &FockSpace, psi: &[Complex64], signature: &[bool]) -> Result<Vec<Complex64>> {
    let len = signature.len();
    if len == 0 || len % 2 != 0 {
        return Err(Error::Config(format!("signature length must be even and positive, got {len}")));
    }
    let j = len / 2;
    let l = space.n_modes();
    let nvec = l.pow(j as u32);
    if 2 * nvec * space.dim() > TENSOR_BUDGET * 4 {
        return Err(Error::Guard(format!(
            "correlation tensor of order {len} on {l} modes exceeds the memory budget"
        )));
    }
    let (left_sig, right_sig) = signature.split_at(j);
    // Left vectors: (A_1 ... A_j)* ψ = A_j* ... A_1* ψ.
    let left: Vec<Vec<Complex64>> = (0..nvec)
        .into_par_iter()
        .map(|flat| {
            let idx = unflatten(flat, l, j);
            let ops: Vec<Op> = idx
                .iter()
                .zip(left_sig)
                .map(|(&m, &d)| Op { dagger: d, mode: m }.adjoint())
                .rev()
                .collect();
            space.apply_ops(&ops, psi)
        })
        .collect();
    let right: Vec<Vec<Complex64>> = (0..nvec)
        .into_par_iter()
        .map(|flat| {
            let idx = unflatten(flat, l, j);
            let ops: Vec<Op> = idx.iter().zip(right_sig).map(|(&m, &d)| Op { dagger: d, mode: m }).collect();
            space.apply_ops(&ops, psi)
        })
        .collect();
    let zero = |v: &Vec<Complex64>| v.iter().all(|x| *x == Complex64::new(0.0, 0.0));
    let lz: Vec<bool> = left.iter().map(zero).collect();
    let rz: Vec<bool> = right.iter().map(zero).collect();
    Ok((0..nvec * nvec)
        .into_par_iter()
        .map(|flat| {
            let (a, b) = (flat / nvec, flat % nvec);
            if lz[a] || rz[b] {
                Complex64::new(0.0, 0.0)
            } else {
                inner(&left[a], &right[b])
            }
        })
        .collect())
}

/// Σ O(x;x') a_x a_x' ψ.
pub fn pair_annihilate(space: &FockSpace, o: &CMat, psi: &[Complex64]) -> Vec<Complex64> {
    pair_apply(space, o, psi, false)
}

/// Σ O(x;x') a*_x a*_x' ψ.
pub fn pair_create(space: &FockSpace, o: &CMat, psi: &[Complex64]) -> Vec<Complex64> {
    pair_apply(space, o, psi, true)
}

fn pair_apply(space: &FockSpace, o: &CMat, psi: &[Complex64], dagger: bool) -> Vec<Complex64> {
    let l = space.n_modes();
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for (n, &a) in psi.iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for x2 in 0..l {
            let Some((m1, s1)) = space.act(Op { dagger, mode: x2 }, n) else { continue };
            for x1 in 0..l {
                let Some((m2, s2)) = space.act(Op { dagger, mode: x1 }, m1) else { continue };
                out[m2] += a * o[(x1, x2)] * (s1 * s2);
            }
        }
    }
    out
}

/// dΓ(O) ψ = Σ O(i;j) a*_i a_j ψ.
pub fn dgamma_apply(space: &FockSpace, o: &CMat, psi: &[Complex64]) -> Vec<Complex64> {
    let l = space.n_modes();
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for (n, &a) in psi.iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..l {
            let Some((m1, s1)) = space.annihilate(j, n) else { continue };
            for i in 0..l {
                let Some((m2, s2)) = space.create(i, m1) else { continue };
                out[m2] += a * o[(i, j)] * (s1 * s2);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::sparse::second_quantize;
    use crate::linalg::c;

    #[test]
    fn slater_rdm_is_diagonal() {
        let fs = FockSpace::new(4).unwrap();
        let psi = fs.basis_state(0b1010).amps;
        let g = rdm1(&fs, &psi);
        let mut want = CMat::zeros(4, 4);
        want[(1, 1)] = c(1.0, 0.0);
        want[(3, 3)] = c(1.0, 0.0);
        assert_eq!(g, want);
        assert_eq!(pairing1(&fs, &psi).norm(), 0.0);
    }

    #[test]
    fn dgamma_matches_sparse() {
        let fs = FockSpace::new(4).unwrap();
        let o = CMat::from_fn(4, 4, |i, j| c(i as f64 - j as f64 * 0.5, (i * j) as f64 * 0.1));
        let psi: Vec<Complex64> = (0..16).map(|n| c(n as f64 * 0.1, 1.0 - n as f64 * 0.05)).collect();
        let a = dgamma_apply(&fs, &o, &psi);
        let b = second_quantize(&fs, &o).unwrap().apply(&psi);
        let d: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(d < 1e-14);
        // ⟨ψ, dΓ(O) ψ⟩ = tr O γ
        let g = rdm1(&fs, &psi);
        let lhs = inner(&psi, &a);
        let rhs = (&o * &g).trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn tensor_order_two_is_rdm() {
        let fs = FockSpace::new(3).unwrap();
        let psi: Vec<Complex64> = (0..8).map(|n| c((n as f64).sin(), (n as f64).cos())).collect();
        let t = correlation_tensor(&fs, &psi, &[true, false]).unwrap();
        let g = rdm1(&fs, &psi);
        for y in 0..3 {
            for x in 0..3 {
                assert!((t[y * 3 + x] - g[(x, y)]).norm() < 1e-14);
            }
        }
        assert!(correlation_tensor(&fs, &psi, &[true]).is_err());
    }
}
