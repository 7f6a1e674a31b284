//! Even, real two-body potentials given by Fourier coefficients on the
//! dual lattice `{-2K..2K}^d`.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    dim: usize,
    reach: i32,
    table: Vec<f64>,
    n: f64,
}

impl Potential {
    /// Tabulate `f` over the dual lattice of `lattice`. Fails unless the
    /// table is exactly even.
    pub fn from_fn(lattice: &Lattice, f: impl Fn(&[i32]) -> f64) -> Result<Self> {
        let table: Vec<f64> = lattice.dual_vectors().iter().map(|p| f(p)).collect();
        let pot = Potential {
            dim: lattice.dim(),
            reach: 2 * lattice.cutoff(),
            table,
            n: lattice.n_particles() as f64,
        };
        if pot.table.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("potential has non-finite coefficients".into()));
        }
        let asym = pot.max_asymmetry();
        if asym != 0.0 {
            return Err(Error::Config(format!("potential table is not even (max |V(p)-V(-p)| = {asym:e})")));
        }
        Ok(pot)
    }

    pub fn zero(lattice: &Lattice) -> Self {
        Self::from_fn(lattice, |_| 0.0).expect("zero table is even")
    }

    fn index(&self, p: &[i32]) -> Option<usize> {
        let side = (2 * self.reach + 1) as usize;
        let mut idx = 0usize;
        for &c in p {
            if c.abs() > self.reach {
                return None;
            }
            idx = idx * side + (c + self.reach) as usize;
        }
        Some(idx)
    }

    /// V̂(p), zero outside the table.
    pub fn vhat(&self, p: &[i32]) -> f64 {
        self.index(p).map_or(0.0, |i| self.table[i])
    }

    /// Particle number the 1/N coupling was built for.
    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn with_n(&self, n: f64) -> Self {
        Potential { n, ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|&v| v == 0.0)
    }

    /// Nonzero coefficients as `(p, V̂(p))`.
    pub fn support(&self) -> Vec<(Vec<i32>, f64)> {
        let side = (2 * self.reach + 1) as usize;
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(mut idx, &v)| {
                let mut p = vec![0i32; self.dim];
                for c in (0..self.dim).rev() {
                    p[c] = (idx % side) as i32 - self.reach;
                    idx /= side;
                }
                (p, v)
            })
            .collect()
    }

    pub fn max_asymmetry(&self) -> f64 {
        self.support()
            .iter()
            .map(|(p, v)| {
                let neg: Vec<i32> = p.iter().map(|c| -c).collect();
                (v - self.vhat(&neg)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Σ_p |V̂(p)| (1 + |p|²).
    pub fn weighted_sum(&self) -> f64 {
        self.support()
            .iter()
            .map(|(p, v)| {
                let p2: i64 = p.iter().map(|&c| (c as i64) * (c as i64)).sum();
                v.abs() * (1.0 + p2 as f64)
            })
            .sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.table.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialParams {
    /// Amplitude. For the attractive kind this is the depth and must be positive.
    pub v0: f64,
    /// Gaussian width in momentum units; absent means infinite.
    #[serde(default)]
    pub width: Option<f64>,
}

pub trait PotentialKind: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, params: &PotentialParams, lattice: &Lattice) -> Result<Potential>;
}

fn gaussian(v0: f64, width: Option<f64>, lattice: &Lattice) -> Result<Potential> {
    match width {
        Some(w) if !(w > 0.0) => Err(Error::Config(format!("gaussian width must be positive, got {w}"))),
        Some(w) => Potential::from_fn(lattice, |p| {
            let p2: f64 = p.iter().map(|&c| (c as f64) * (c as f64)).sum();
            v0 * (-p2 / (w * w)).exp()
        }),
        None => Potential::from_fn(lattice, |_| v0),
    }
}

struct Gaussian;

impl PotentialKind for Gaussian {
    fn name(&self) -> &'static str {
        "gaussian"
    }
    fn build(&self, params: &PotentialParams, lattice: &Lattice) -> Result<Potential> {
        gaussian(params.v0, params.width, lattice)
    }
}

struct DeltaLike;

impl PotentialKind for DeltaLike {
    fn name(&self) -> &'static str {
        "delta-like"
    }
    fn build(&self, params: &PotentialParams, lattice: &Lattice) -> Result<Potential> {
        gaussian(params.v0, None, lattice)
    }
}

struct AttractiveGaussian;

impl PotentialKind for AttractiveGaussian {
    fn name(&self) -> &'static str {
        "attractive-gaussian"
    }
    fn build(&self, params: &PotentialParams, lattice: &Lattice) -> Result<Potential> {
        if params.v0 < 0.0 {
            return Err(Error::Config("attractive-gaussian takes a non-negative depth v0".into()));
        }
        gaussian(-params.v0, params.width, lattice)
    }
}

/// Potential kinds by name.
pub struct PotentialRegistry {
    kinds: BTreeMap<&'static str, Box<dyn PotentialKind>>,
}

impl PotentialRegistry {
    pub fn empty() -> Self {
        PotentialRegistry { kinds: BTreeMap::new() }
    }

    pub fn register(&mut self, kind: Box<dyn PotentialKind>) {
        self.kinds.insert(kind.name(), kind);
    }

    pub fn get(&self, name: &str) -> Result<&dyn PotentialKind> {
        self.kinds.get(name).map(|k| k.as_ref()).ok_or_else(|| {
            Error::Config(format!("unknown potential kind '{name}' (known: {})", self.names().join(", ")))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.kinds.keys().copied().collect()
    }

    pub fn build(&self, name: &str, params: &PotentialParams, lattice: &Lattice) -> Result<Potential> {
        self.get(name)?.build(params, lattice)
    }
}

impl Default for PotentialRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Gaussian));
        r.register(Box::new(DeltaLike));
        r.register(Box::new(AttractiveGaussian));
        r
    }
}
