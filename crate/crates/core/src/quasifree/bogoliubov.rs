//! Bogoliubov maps as products of elementary factors.
//!
//! A map R is described by blocks (u, v) with
//! `R* a(f) R = a(u f) + a*(v̄ f̄)`, so that the state RΩ has ω = v*v and
//! α = v*ū. Factors are listed left to right, `R = F_1 F_2 ... F_n`.

use super::state::QuasiFree;
use crate::linalg::{c, frob};
use crate::CMat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Factor {
    /// exp(θ (e^{iφ} a*_i a_j - e^{-iφ} a*_j a_i)).
    Givens { i: usize, j: usize, theta: f64, phi: f64 },
    /// exp(iφ n_i).
    Phase { i: usize, phi: f64 },
    /// exp(θ (a*_i a*_j - a_j a_i)).
    Pair { i: usize, j: usize, theta: f64 },
    /// (a_k + a*_k)(-1)^{N - n_k}, fills an empty mode k.
    ParticleHole { k: usize },
}

impl Factor {
    /// Right-multiply the map (u, v) by this factor.
    fn compose_right(&self, u: &mut CMat, v: &mut CMat) {
        match *self {
            Factor::Givens { i, j, theta, phi } => {
                // u_F = D* with D = [[c, e^{iφ}s], [-e^{-iφ}s, c]] on (i, j).
                let (s, co) = theta.sin_cos();
                let e = Complex64::from_polar(1.0, phi);
                let b = [[c(co, 0.0), -e * s], [e.conj() * s, c(co, 0.0)]];
                rotate_rows(u, i, j, b);
                let bc = [[b[0][0].conj(), b[0][1].conj()], [b[1][0].conj(), b[1][1].conj()]];
                rotate_rows(v, i, j, bc);
            }
            Factor::Phase { i, phi } => {
                let e = Complex64::from_polar(1.0, phi);
                for col in 0..u.ncols() {
                    u[(i, col)] *= e.conj();
                    v[(i, col)] *= e;
                }
            }
            Factor::Pair { i, j, theta } => {
                let (s, co) = theta.sin_cos();
                for col in 0..u.ncols() {
                    let (ui, uj, vi, vj) = (u[(i, col)], u[(j, col)], v[(i, col)], v[(j, col)]);
                    u[(i, col)] = ui * co - vj * s;
                    u[(j, col)] = uj * co + vi * s;
                    v[(i, col)] = vi * co - uj * s;
                    v[(j, col)] = vj * co + ui * s;
                }
            }
            Factor::ParticleHole { k } => {
                for col in 0..u.ncols() {
                    std::mem::swap(&mut u[(k, col)], &mut v[(k, col)]);
                }
            }
        }
    }

    /// Blocks (u, v) of this single factor on `l` modes.
    pub fn blocks(&self, l: usize) -> (CMat, CMat) {
        let mut u = CMat::identity(l, l);
        let mut v = CMat::zeros(l, l);
        self.compose_right(&mut u, &mut v);
        (u, v)
    }

    pub fn modes(&self) -> Vec<usize> {
        match *self {
            Factor::Givens { i, j, .. } | Factor::Pair { i, j, .. } => vec![i, j],
            Factor::Phase { i, .. } => vec![i],
            Factor::ParticleHole { k } => vec![k],
        }
    }
}

fn rotate_rows(m: &mut CMat, i: usize, j: usize, b: [[Complex64; 2]; 2]) {
    for col in 0..m.ncols() {
        let (x, y) = (m[(i, col)], m[(j, col)]);
        m[(i, col)] = b[0][0] * x + b[0][1] * y;
        m[(j, col)] = b[1][0] * x + b[1][1] * y;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BogoliubovMap {
    pub u: CMat,
    pub v: CMat,
    pub factors: Vec<Factor>,
}

impl BogoliubovMap {
    pub fn identity(l: usize) -> Self {
        BogoliubovMap { u: CMat::identity(l, l), v: CMat::zeros(l, l), factors: Vec::new() }
    }

    pub fn from_factors(l: usize, factors: Vec<Factor>) -> Self {
        let mut u = CMat::identity(l, l);
        let mut v = CMat::zeros(l, l);
        for f in &factors {
            f.compose_right(&mut u, &mut v);
        }
        BogoliubovMap { u, v, factors }
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    /// Largest Frobenius residual among the four defining relations.
    pub fn relation_residual(&self) -> f64 {
        let l = self.dim();
        let one = CMat::identity(l, l);
        let (u, v) = (&self.u, &self.v);
        let (ub, vb) = (u.conjugate(), v.conjugate());
        [
            frob(&(u.adjoint() * u + v.adjoint() * v - &one)),
            frob(&(u.adjoint() * &vb + v.adjoint() * &ub)),
            frob(&(u * u.adjoint() + &vb * v.transpose() - &one)),
            frob(&(u * v.adjoint() + &vb * u.transpose())),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// The state RΩ: ω = v*v, α = v*ū.
    pub fn state(&self) -> QuasiFree {
        QuasiFree { omega: self.v.adjoint() * &self.v, alpha: self.v.adjoint() * self.u.conjugate() }
    }

    /// Largest entry difference between the composed factors and (u, v).
    pub fn factor_residual(&self) -> f64 {
        let re = Self::from_factors(self.dim(), self.factors.clone());
        let du = (&re.u - &self.u).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let dv = (&re.v - &self.v).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        du.max(dv)
    }

    /// Random map: a Haar unitary rotation over a random pattern of filled
    /// modes and paired modes.
    pub fn random(l: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = CMat::from_fn(l, l, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            c(re, im)
        });
        let d = haar_from_gaussian(z);
        let mut factors = unitary_factors(&d);
        let n_fill = rng.random_range(0..=l / 2);
        let n_pair = rng.random_range(0..=(l - n_fill) / 2);
        let n_pair = n_pair.max(usize::from(l - n_fill >= 2));
        for p in 0..n_pair {
            let theta = rng.random_range(0.2..1.37);
            factors.push(Factor::Pair { i: n_fill + 2 * p, j: n_fill + 2 * p + 1, theta });
        }
        for k in 0..n_fill {
            factors.push(Factor::ParticleHole { k });
        }
        Self::from_factors(l, factors)
    }
}

fn haar_from_gaussian(z: CMat) -> CMat {
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let l = q.ncols();
    let ph: Vec<Complex64> = (0..l)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                c(1.0, 0.0)
            }
        })
        .collect();
    CMat::from_fn(l, l, |r_, c_| q[(r_, c_)] * ph[c_])
}

/// Factor a unitary D as Givens rotations followed by phases, so that
/// the product of the returned factors acts as Γ(D).
pub fn unitary_factors(d: &CMat) -> Vec<Factor> {
    let l = d.nrows();
    let mut w = d.clone();
    let mut rots = Vec::new();
    for col in 0..l {
        for row in (col + 1..l).rev() {
            let (p, q) = (row - 1, row);
            let (x, y) = (w[(p, col)], w[(q, col)]);
            if y.norm() < 1e-300 {
                continue;
            }
            let theta = y.norm().atan2(x.norm());
            let phi = if x.norm() < 1e-300 { 0.0 } else { -(-y * x.conj()).arg() };
            let (s, co) = theta.sin_cos();
            let e = Complex64::from_polar(1.0, phi);
            // Apply G(θ,φ)* on rows (p, q).
            rotate_rows(&mut w, p, q, [[c(co, 0.0), -e * s], [e.conj() * s, c(co, 0.0)]]);
            rots.push(Factor::Givens { i: p, j: q, theta, phi });
        }
    }
    for i in 0..l {
        let phi = w[(i, i)].arg();
        if phi != 0.0 {
            rots.push(Factor::Phase { i, phi });
        }
    }
    rots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn identity_map() {
        let b = BogoliubovMap::from_factors(4, vec![]);
        assert_eq!(b.u, CMat::identity(4, 4));
        assert_eq!(b.v, CMat::zeros(4, 4));
    }

    #[test]
    fn random_maps_satisfy_relations() {
        for seed in 0..10 {
            let b = BogoliubovMap::random(8, seed);
            assert!(b.relation_residual() < 1e-12, "seed {seed}: {}", b.relation_residual());
            assert!(b.state().purity_residual() < 1e-12);
        }
        assert_eq!(BogoliubovMap::random(6, 3), BogoliubovMap::random(6, 3));
    }

    #[test]
    fn givens_factors_reproduce_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let z = CMat::from_fn(7, 7, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let d = haar_from_gaussian(z);
        let m = BogoliubovMap::from_factors(7, unitary_factors(&d));
        assert!(max_abs(&(&m.u - d.adjoint())) < 1e-12);
        assert!(max_abs(&m.v) < 1e-15);
    }

    #[test]
    fn pair_factor_state() {
        let theta = 0.3f64;
        let b = BogoliubovMap::from_factors(2, vec![Factor::Pair { i: 0, j: 1, theta }]);
        let g = b.state();
        assert!((g.omega[(0, 0)].re - theta.sin().powi(2)).abs() < 1e-15);
        assert!((g.alpha[(0, 1)].re - theta.sin() * theta.cos()).abs() < 1e-15);
        assert!((g.alpha[(1, 0)].re + theta.sin() * theta.cos()).abs() < 1e-15);
    }

    #[test]
    fn particle_hole_fills() {
        let b = BogoliubovMap::from_factors(3, vec![Factor::ParticleHole { k: 1 }]);
        assert_eq!(b.state(), QuasiFree::slater(3, &[1]));
    }
}
