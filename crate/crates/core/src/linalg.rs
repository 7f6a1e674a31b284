use crate::CMat;
use nalgebra::DVector;
use num_complex::Complex64;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
pub fn herm_eig(m: &CMat) -> (Vec<f64>, CMat) {
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// exp(z H) for Hermitian H and complex scalar z.
pub fn expm_herm(h: &CMat, z: Complex64) -> CMat {
    let (vals, vecs) = herm_eig(h);
    let d = DVector::from_iterator(vals.len(), vals.iter().map(|&l| (z * l).exp()));
    let scaled = CMat::from_fn(vecs.nrows(), vecs.ncols(), |r, c| vecs[(r, c)] * d[c]);
    scaled * vecs.adjoint()
}

pub fn frob(m: &CMat) -> f64 {
    m.norm()
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

pub fn trace_norm(m: &CMat) -> f64 {
    singular_values(m).iter().sum()
}

pub fn op_norm(m: &CMat) -> f64 {
    singular_values(m).iter().fold(0.0, |a, &b| a.max(b))
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Commutator with a diagonal matrix given by its (complex) diagonal.
pub fn commutator_diag(a: &CMat, d: &[Complex64]) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |r, c| a[(r, c)] * (d[c] - d[r]))
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
