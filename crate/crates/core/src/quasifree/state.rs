use crate::error::{Error, Result};
use crate::linalg::{frob, herm_eig};
use crate::CMat;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Pure quasi-free state through its one-particle density ω and pairing α,
/// with ω(x;y) = ⟨a*_y a_x⟩ and α(x;y) = ⟨a_y a_x⟩.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiFree {
    pub omega: CMat,
    pub alpha: CMat,
}

/// Purity tolerance in Frobenius norm.
pub const PURITY_TOL: f64 = 1e-9;

impl QuasiFree {
    pub fn new(omega: CMat, alpha: CMat) -> Result<Self> {
        let l = omega.nrows();
        if omega.ncols() != l || alpha.nrows() != l || alpha.ncols() != l {
            return Err(Error::Dimension(format!(
                "omega {}x{}, alpha {}x{}",
                omega.nrows(),
                omega.ncols(),
                alpha.nrows(),
                alpha.ncols()
            )));
        }
        Ok(QuasiFree { omega, alpha })
    }

    pub fn vacuum(l: usize) -> Self {
        QuasiFree { omega: CMat::zeros(l, l), alpha: CMat::zeros(l, l) }
    }

    /// Slater determinant filling the listed modes.
    pub fn slater(l: usize, occupied: &[usize]) -> Self {
        let mut g = Self::vacuum(l);
        for &m in occupied {
            g.omega[(m, m)] = Complex64::new(1.0, 0.0);
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }

    /// Γ = [[ω, α], [α*, 1 - ω̄]].
    pub fn gamma(&self) -> CMat {
        let l = self.dim();
        let mut g = DMatrix::zeros(2 * l, 2 * l);
        g.view_mut((0, 0), (l, l)).copy_from(&self.omega);
        g.view_mut((0, l), (l, l)).copy_from(&self.alpha);
        g.view_mut((l, 0), (l, l)).copy_from(&self.alpha.adjoint());
        let lower = CMat::identity(l, l) - self.omega.conjugate();
        g.view_mut((l, l), (l, l)).copy_from(&lower);
        g
    }

    /// Read ω and α back from the upper blocks of Γ.
    pub fn from_gamma(gamma: &CMat) -> Self {
        let l = gamma.nrows() / 2;
        QuasiFree {
            omega: gamma.view((0, 0), (l, l)).into_owned(),
            alpha: gamma.view((0, l), (l, l)).into_owned(),
        }
    }

    /// ‖Γ² - Γ‖_F.
    pub fn purity_residual(&self) -> f64 {
        let g = self.gamma();
        frob(&(&g * &g - &g))
    }

    /// ‖αᵀ + α‖_F.
    pub fn antisymmetry_residual(&self) -> f64 {
        frob(&(self.alpha.transpose() + &self.alpha))
    }

    pub fn hermiticity_residual(&self) -> f64 {
        frob(&(self.omega.adjoint() - &self.omega))
    }

    pub fn trace(&self) -> f64 {
        self.omega.trace().re
    }

    pub fn alpha_hs(&self) -> f64 {
        frob(&self.alpha)
    }

    /// Eigenvalues of ω, ascending.
    pub fn occupations(&self) -> Vec<f64> {
        herm_eig(&self.omega).0
    }

    pub fn check_pure(&self, tol: f64) -> Result<()> {
        let residual = self.purity_residual();
        if residual > tol || !residual.is_finite() {
            return Err(Error::Impure { residual, tolerance: tol });
        }
        Ok(())
    }

    pub fn distance(&self, other: &QuasiFree) -> f64 {
        (frob(&(&self.omega - &other.omega)).powi(2) + frob(&(&self.alpha - &other.alpha)).powi(2)).sqrt()
    }

    /// Row-major (re, im) pairs, the JSON snapshot layout.
    pub fn to_snapshot(&self) -> StateSnapshot {
        let flat = |m: &CMat| {
            let l = m.nrows();
            (0..l).flat_map(|r| (0..l).map(move |c| (r, c))).map(|(r, c)| [m[(r, c)].re, m[(r, c)].im]).collect()
        };
        StateSnapshot { dim: self.dim(), omega: flat(&self.omega), alpha: flat(&self.alpha) }
    }

    pub fn from_snapshot(s: &StateSnapshot) -> Result<Self> {
        let l = s.dim;
        if s.omega.len() != l * l || s.alpha.len() != l * l {
            return Err(Error::Dimension("snapshot entry count does not match dim".into()));
        }
        let build = |v: &[[f64; 2]]| CMat::from_fn(l, l, |r, c| Complex64::new(v[r * l + c][0], v[r * l + c][1]));
        Self::new(build(&s.omega), build(&s.alpha))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub dim: usize,
    pub omega: Vec<[f64; 2]>,
    pub alpha: Vec<[f64; 2]>,
}
