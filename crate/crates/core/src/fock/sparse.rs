//! Compressed sparse row operators on Fock space.

use super::space::FockSpace;
use crate::error::{Error, Result};
use crate::quasifree::Op;
use crate::CMat;
use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct SparseOp {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    data: Vec<Complex64>,
}

fn merge(mut entries: Vec<(usize, Complex64)>) -> Vec<(usize, Complex64)> {
    entries.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, Complex64)> = Vec::with_capacity(entries.len());
    for (i, v) in entries {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|e| e.1 != Complex64::new(0.0, 0.0));
    out
}

impl SparseOp {
    /// Build from a generator of row entries; duplicates are summed.
    pub fn from_rows<F>(dim: usize, row: F) -> Self
    where
        F: Fn(usize) -> Vec<(usize, Complex64)> + Sync,
    {
        let rows: Vec<Vec<(usize, Complex64)>> = (0..dim).into_par_iter().map(|r| merge(row(r))).collect();
        Self::assemble(dim, rows)
    }

    /// Build from a generator of column entries; duplicates are summed.
    pub fn from_columns<F>(dim: usize, col: F) -> Self
    where
        F: Fn(usize) -> Vec<(usize, Complex64)> + Sync,
    {
        let cols: Vec<Vec<(usize, Complex64)>> = (0..dim).into_par_iter().map(|c| merge(col(c))).collect();
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
        for (c, entries) in cols.into_iter().enumerate() {
            for (r, v) in entries {
                rows[r].push((c, v));
            }
        }
        Self::assemble(dim, rows)
    }

    fn assemble(dim: usize, rows: Vec<Vec<(usize, Complex64)>>) -> Self {
        let nnz: usize = rows.iter().map(|r| r.len()).sum();
        let mut indptr = Vec::with_capacity(dim + 1);
        let mut indices = Vec::with_capacity(nnz);
        let mut data = Vec::with_capacity(nnz);
        indptr.push(0);
        for r in rows {
            for (c, v) in r {
                indices.push(c as u32);
                data.push(v);
            }
            indptr.push(indices.len());
        }
        SparseOp { dim, indptr, indices, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.indptr[r]..self.indptr[r + 1]).map(move |k| (self.indices[k] as usize, self.data[k]))
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .into_par_iter()
            .map(|r| self.row(r).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.dim];
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                rows[c].push((r, v.conj()));
            }
        }
        Self::assemble(self.dim, rows)
    }

    /// Largest entry of A - A*.
    pub fn hermiticity_residual(&self) -> f64 {
        let adj = self.adjoint();
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            let a = merge(self.row(r).chain(adj.row(r).map(|(c, v)| (c, -v))).collect());
            for (_, v) in a {
                worst = worst.max(v.norm());
            }
        }
        worst
    }

    /// Largest entry of AB - BA.
    pub fn commutator_residual(&self, other: &SparseOp) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            let mut acc = Vec::new();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    acc.push((c, a * b));
                }
            }
            for (k, b) in other.row(r) {
                for (c, a) in self.row(k) {
                    acc.push((c, -(b * a)));
                }
            }
            for (_, v) in merge(acc) {
                worst = worst.max(v.norm());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] += v;
            }
        }
        m
    }

    /// Largest absolute diagonal-dominance bound on the spectrum.
    pub fn gershgorin_bound(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.row(r).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

fn single(space: &FockSpace, op: Op) -> SparseOp {
    SparseOp::from_columns(space.dim(), |n| {
        space.act(op, n).map(|(m, s)| vec![(m, Complex64::new(s, 0.0))]).unwrap_or_default()
    })
}

pub fn annihilator(space: &FockSpace, mode: usize) -> Result<SparseOp> {
    check_mode(space, mode)?;
    Ok(single(space, Op::annihilate(mode)))
}

pub fn creator(space: &FockSpace, mode: usize) -> Result<SparseOp> {
    check_mode(space, mode)?;
    Ok(single(space, Op::create(mode)))
}

fn check_mode(space: &FockSpace, mode: usize) -> Result<()> {
    if mode >= space.n_modes() {
        return Err(Error::Dimension(format!("mode {mode} out of range {}", space.n_modes())));
    }
    Ok(())
}

pub fn number_operator(space: &FockSpace) -> SparseOp {
    SparseOp::from_rows(space.dim(), |n| vec![(n, Complex64::new(n.count_ones() as f64, 0.0))])
}

/// dΓ(O) = Σ O(i;j) a*_i a_j.
pub fn second_quantize(space: &FockSpace, o: &CMat) -> Result<SparseOp> {
    let l = space.n_modes();
    if o.nrows() != l || o.ncols() != l {
        return Err(Error::Dimension(format!("operator is {}x{}, space has {l} modes", o.nrows(), o.ncols())));
    }
    Ok(SparseOp::from_columns(space.dim(), |n| {
        let mut out = Vec::new();
        for j in 0..l {
            let Some((m1, s1)) = space.annihilate(j, n) else { continue };
            for i in 0..l {
                let v = o[(i, j)];
                if v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                if let Some((m2, s2)) = space.create(i, m1) {
                    out.push((m2, v * (s1 * s2)));
                }
            }
        }
        out
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn car_as_matrices() {
        let fs = FockSpace::new(4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let a = annihilator(&fs, i).unwrap().to_dense();
                let ad = creator(&fs, j).unwrap().to_dense();
                let mut anti = &a * &ad + &ad * &a;
                if i == j {
                    anti -= CMat::identity(16, 16);
                }
                assert_eq!(anti.norm(), 0.0);
            }
        }
    }

    #[test]
    fn identity_quantizes_to_number() {
        let fs = FockSpace::new(3).unwrap();
        let n = second_quantize(&fs, &CMat::identity(3, 3)).unwrap().to_dense();
        assert_eq!(n, number_operator(&fs).to_dense());
        assert_eq!(n[(0b111, 0b111)], c(3.0, 0.0));
    }

    #[test]
    fn hermitian_in_hermitian_out() {
        let fs = FockSpace::new(3).unwrap();
        let mut o = CMat::zeros(3, 3);
        o[(0, 2)] = c(0.3, 0.4);
        o[(2, 0)] = c(0.3, -0.4);
        o[(1, 1)] = c(2.0, 0.0);
        assert!(second_quantize(&fs, &o).unwrap().hermiticity_residual() < 1e-15);
        o[(2, 0)] = c(0.0, 0.0);
        assert!(second_quantize(&fs, &o).unwrap().hermiticity_residual() > 0.1);
        assert!(second_quantize(&fs, &CMat::zeros(2, 2)).is_err());
    }
}
