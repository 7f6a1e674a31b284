//! Canonical Bloch-Messiah factorization of a pure quasi-free state.
//!
//! Finds a unitary D with ω = D ω₀ D* and α = D α₀ Dᵀ, where ω₀ is
//! diagonal (filled modes, then pairs by descending occupation, then empty
//! modes) and α₀ couples consecutive pair modes with +√(λ(1-λ)) above the
//! diagonal. The state is then Γ(D) · pair rotations · fills acting on Ω.

use super::bogoliubov::{unitary_factors, BogoliubovMap, Factor};
use super::state::{QuasiFree, PURITY_TOL};
use crate::error::{Error, Result};
use crate::linalg::herm_eig;
use crate::CMat;
use nalgebra::DVector;
use num_complex::Complex64;

/// Eigenvalues closer than this are one cluster.
pub const CLUSTER_TOL: f64 = 1e-9;
/// Occupations within this of 0 or 1 count as empty or filled.
pub const EDGE_TOL: f64 = 1e-10;

type CVec = DVector<Complex64>;

/// Pick orthonormal vectors from the column space of `basis` by projecting
/// unit vectors, largest projection first and ties in index order.
struct Picker {
    basis: Vec<CVec>,
    taken: Vec<CVec>,
}

impl Picker {
    fn new(basis: Vec<CVec>) -> Self {
        Picker { basis, taken: Vec::new() }
    }

    fn project(&self, e: usize) -> CVec {
        let l = self.basis[0].len();
        let mut out = CVec::zeros(l);
        for b in &self.basis {
            out += b * b[e].conj();
        }
        for t in &self.taken {
            out -= t * t[e].conj();
        }
        out
    }

    fn remaining(&self) -> usize {
        self.basis.len() - self.taken.len()
    }

    fn next(&mut self) -> CVec {
        let l = self.basis[0].len();
        let mut best = (0usize, -1.0f64);
        for e in 0..l {
            let w = self.project(e).norm_squared();
            if w > best.1 + 1e-12 {
                best = (e, w);
            }
        }
        let mut f = self.project(best.0);
        for t in &self.taken {
            let o = t.dotc(&f);
            f -= t * o;
        }
        let n = f.norm();
        f /= Complex64::from(n);
        f
    }

    fn accept(&mut self, f: CVec) {
        self.taken.push(f);
    }
}

/// Canonical form of a pure state.
#[derive(Clone, Debug)]
pub struct Canonical {
    /// Columns are the canonical modes.
    pub d: CMat,
    pub n_filled: usize,
    /// Occupations of the paired modes, one entry per pair.
    pub pair_lambda: Vec<f64>,
}

pub fn canonical_form(g: &QuasiFree, tol: f64) -> Result<Canonical> {
    g.check_pure(tol)?;
    let l = g.dim();
    let (vals, vecs) = herm_eig(&g.omega);
    // Clusters in descending occupation.
    let mut clusters: Vec<(f64, Vec<CVec>)> = Vec::new();
    for idx in (0..l).rev() {
        let v = vecs.column(idx).into_owned();
        match clusters.last_mut() {
            Some((lam, members)) if (*lam - vals[idx]).abs() < CLUSTER_TOL => members.push(v),
            _ => clusters.push((vals[idx], vec![v])),
        }
    }
    let mut filled = Vec::new();
    let mut paired: Vec<(f64, CVec, CVec)> = Vec::new();
    let mut empty = Vec::new();
    for (lam, members) in clusters {
        let mut picker = Picker::new(members);
        if lam > 1.0 - EDGE_TOL || lam < EDGE_TOL {
            while picker.remaining() > 0 {
                let f = picker.next();
                picker.accept(f.clone());
                if lam > 0.5 { filled.push(f) } else { empty.push(f) }
            }
            continue;
        }
        if picker.remaining() % 2 != 0 {
            return Err(Error::Numerical(format!("odd multiplicity for paired occupation {lam}")));
        }
        while picker.remaining() > 0 {
            let f = picker.next();
            let af = &g.alpha * f.conjugate();
            let s = af.norm();
            if s < 1e-12 {
                return Err(Error::Numerical(format!("no pairing partner at occupation {lam}")));
            }
            let gvec = af * Complex64::from(-1.0 / s);
            picker.accept(f.clone());
            picker.accept(gvec.clone());
            paired.push((lam, f, gvec));
        }
    }
    let n_filled = filled.len();
    let mut cols: Vec<CVec> = filled;
    let mut pair_lambda = Vec::new();
    for (lam, f, gv) in paired {
        pair_lambda.push(lam);
        cols.push(f);
        cols.push(gv);
    }
    cols.extend(empty);
    let d = CMat::from_columns(&cols);
    Ok(Canonical { d, n_filled, pair_lambda })
}

/// Bloch-Messiah factorization with its (u, v) blocks.
pub fn bloch_messiah(g: &QuasiFree) -> Result<BogoliubovMap> {
    bloch_messiah_tol(g, PURITY_TOL)
}

pub fn bloch_messiah_tol(g: &QuasiFree, tol: f64) -> Result<BogoliubovMap> {
    let can = canonical_form(g, tol)?;
    let l = g.dim();
    let mut factors = unitary_factors(&can.d);
    for (p, &lam) in can.pair_lambda.iter().enumerate() {
        let i = can.n_filled + 2 * p;
        let theta = lam.clamp(0.0, 1.0).sqrt().asin();
        factors.push(Factor::Pair { i, j: i + 1, theta });
    }
    for k in 0..can.n_filled {
        factors.push(Factor::ParticleHole { k });
    }
    let map = BogoliubovMap::from_factors(l, factors);
    let err = map.state().distance(g);
    if err > 1e3 * tol.max(1e-12) {
        return Err(Error::Numerical(format!("factorization misses the state by {err:e}")));
    }
    Ok(map)
}
