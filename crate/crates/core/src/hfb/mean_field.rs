//! Mean-field operators of the HFB functional in the momentum basis.
//!
//! With truncated shifts S_p,
//! direct D = (1/N) Σ_q V̂(q) n(q) S_q where n(q) = Σ_c ω(c; c - q),
//! exchange X = (1/N) Σ_p V̂(p) S_p ω S_p*,
//! pairing Π = (1/N) Σ_p V̂(p) S_p α S_{-p}ᵀ,
//! and h = T + D - X.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::potential::Potential;
use crate::quasifree::QuasiFree;
use crate::CMat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "HFB")]
    Hfb,
    #[serde(rename = "HF")]
    Hf,
    #[serde(rename = "HB")]
    Hb,
}

impl Variant {
    pub fn flags(self) -> MeanFieldFlags {
        match self {
            Variant::Hfb => MeanFieldFlags { exchange: true, pairing: true },
            Variant::Hf => MeanFieldFlags { exchange: true, pairing: false },
            Variant::Hb => MeanFieldFlags { exchange: false, pairing: false },
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "HFB" | "hfb" => Ok(Variant::Hfb),
            "HF" | "hf" => Ok(Variant::Hf),
            "HB" | "hb" => Ok(Variant::Hb),
            _ => Err(Error::Config(format!("unknown variant '{s}' (HFB, HF, HB)"))),
        }
    }
}

/// Which mean-field terms enter the generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeanFieldFlags {
    pub exchange: bool,
    pub pairing: bool,
}

#[derive(Clone, Debug)]
pub struct MeanFieldTerms {
    pub direct: CMat,
    pub exchange: CMat,
    pub pairing: CMat,
    pub h: CMat,
}

impl MeanFieldTerms {
    /// [[h, Π], [Π*, -h̄]].
    pub fn generator(&self) -> CMat {
        let l = self.h.nrows();
        let mut g = CMat::zeros(2 * l, 2 * l);
        g.view_mut((0, 0), (l, l)).copy_from(&self.h);
        g.view_mut((0, l), (l, l)).copy_from(&self.pairing);
        g.view_mut((l, 0), (l, l)).copy_from(&self.pairing.adjoint());
        g.view_mut((l, l), (l, l)).copy_from(&(-self.h.conjugate()));
        g
    }
}

struct Transfer {
    vhat: f64,
    plus: Vec<Option<usize>>,
    minus: Vec<Option<usize>>,
}

/// Lattice, potential and coupling with precomputed shift tables.
pub struct HfbModel {
    lattice: Lattice,
    potential: Potential,
    n: f64,
    flags: MeanFieldFlags,
    kinetic: Vec<f64>,
    transfers: Vec<Transfer>,
}

impl HfbModel {
    pub fn new(lattice: &Lattice, potential: &Potential, n: f64) -> Self {
        let transfers = potential
            .support()
            .into_iter()
            .map(|(p, vhat)| {
                let minus: Vec<i32> = p.iter().map(|c| -c).collect();
                Transfer { vhat, plus: lattice.shift_map(&p), minus: lattice.shift_map(&minus) }
            })
            .collect();
        HfbModel {
            lattice: lattice.clone(),
            potential: potential.clone(),
            n,
            flags: Variant::Hfb.flags(),
            kinetic: lattice.kinetic_diag(),
            transfers,
        }
    }

    pub fn with_flags(mut self, flags: MeanFieldFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn flags(&self) -> MeanFieldFlags {
        self.flags
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.lattice.eps()
    }

    fn check(&self, g: &QuasiFree) -> Result<()> {
        if g.dim() != self.lattice.n_modes() {
            return Err(Error::Dimension(format!("state on {} modes, lattice has {}", g.dim(), self.lattice.n_modes())));
        }
        Ok(())
    }

    /// Unflagged direct, exchange and pairing operators.
    fn raw_terms(&self, g: &QuasiFree) -> (CMat, CMat, CMat) {
        let l = self.lattice.n_modes();
        let inv_n = 1.0 / self.n;
        let mut direct = CMat::zeros(l, l);
        let mut exchange = CMat::zeros(l, l);
        let mut pairing = CMat::zeros(l, l);
        let (om, al) = (&g.omega, &g.alpha);
        for t in &self.transfers {
            let w = t.vhat * inv_n;
            // n(q) = Σ_c ω(c; c - q), then D(c + q; c) += w n(q).
            let nq: Complex64 = (0..l).filter_map(|c| t.minus[c].map(|cm| om[(c, cm)])).sum();
            if nq != Complex64::new(0.0, 0.0) {
                for c in 0..l {
                    if let Some(cp) = t.plus[c] {
                        direct[(cp, c)] += nq * w;
                    }
                }
            }
            for a in 0..l {
                let Some(am) = t.minus[a] else { continue };
                for b in 0..l {
                    if let Some(bm) = t.minus[b] {
                        exchange[(a, b)] += om[(am, bm)] * w;
                    }
                    if let Some(bp) = t.plus[b] {
                        pairing[(a, b)] += al[(am, bp)] * w;
                    }
                }
            }
        }
        (direct, exchange, pairing)
    }

    pub fn mean_field(&self, g: &QuasiFree) -> Result<MeanFieldTerms> {
        self.check(g)?;
        let l = self.lattice.n_modes();
        let (direct, mut exchange, mut pairing) = self.raw_terms(g);
        if !self.flags.exchange {
            exchange = CMat::zeros(l, l);
        }
        if !self.flags.pairing {
            pairing = CMat::zeros(l, l);
        }
        let mut h = &direct - &exchange;
        for (m, k) in self.kinetic.iter().enumerate() {
            h[(m, m)] += k;
        }
        // Exact symmetries, so round-off cannot break them.
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let pairing = (&pairing - pairing.transpose()) * Complex64::new(0.5, 0.0);
        Ok(MeanFieldTerms { direct, exchange, pairing, h })
    }

    /// HFB energy tr(Tω) + ½tr(Dω) - ½tr(Xω) + ½tr(α*Π), always with all terms.
    pub fn energy(&self, g: &QuasiFree) -> Result<f64> {
        self.check(g)?;
        Ok(self.energy_parts(g).total())
    }

    pub fn energy_parts(&self, g: &QuasiFree) -> EnergyParts {
        let (d, x, p) = self.raw_terms(g);
        let kinetic: f64 = self.kinetic.iter().enumerate().map(|(m, k)| k * g.omega[(m, m)].re).sum();
        EnergyParts {
            kinetic,
            direct: 0.5 * (&d * &g.omega).trace().re,
            exchange: -0.5 * (&x * &g.omega).trace().re,
            pairing: 0.5 * (g.alpha.adjoint() * &p).trace().re,
        }
    }

    /// (dω/dt, dα/dt) from iε dω = [h,ω] + Πα* - αΠ* and
    /// iε dα = hα + αh̄ + Π(1 - ω̄) - ωΠ.
    pub fn rhs(&self, g: &QuasiFree) -> Result<(CMat, CMat)> {
        let mf = self.mean_field(g)?;
        let l = g.dim();
        let (h, p, om, al) = (&mf.h, &mf.pairing, &g.omega, &g.alpha);
        let f = Complex64::new(0.0, -1.0 / self.eps());
        let dw = (h * om - om * h + p * al.adjoint() - al * p.adjoint()) * f;
        let one_minus = CMat::identity(l, l) - om.conjugate();
        let da = (h * al + al * h.conjugate() + p * one_minus - om * p) * f;
        Ok((dw, da))
    }

    /// (-i/ε)[H, Γ] on the doubled space.
    pub fn rhs_block(&self, gamma: &CMat) -> Result<CMat> {
        let g = QuasiFree::from_gamma(gamma);
        let big = self.mean_field(&g)?.generator();
        Ok((&big * gamma - gamma * &big) * Complex64::new(0.0, -1.0 / self.eps()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyParts {
    pub kinetic: f64,
    pub direct: f64,
    pub exchange: f64,
    pub pairing: f64,
}

impl EnergyParts {
    pub fn total(&self) -> f64 {
        self.kinetic + self.direct + self.exchange + self.pairing
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::potential::{PotentialParams, PotentialRegistry};
    use crate::quasifree::BogoliubovMap;

    fn setup() -> (Lattice, Potential) {
        let lat = Lattice::new(1, 1, 2, vec![1, 1], None).unwrap();
        let v = PotentialRegistry::default()
            .build("gaussian", &PotentialParams { v0: 0.8, width: Some(1.3) }, &lat)
            .unwrap();
        (lat, v)
    }

    #[test]
    fn zero_potential_gives_kinetic() {
        let (lat, _) = setup();
        let m = HfbModel::new(&lat, &Potential::zero(&lat), 2.0);
        let g = BogoliubovMap::random(6, 1).state();
        let mf = m.mean_field(&g).unwrap();
        assert_eq!(mf.exchange.norm(), 0.0);
        assert_eq!(mf.pairing.norm(), 0.0);
        assert!(max_abs(&(mf.h - lat.kinetic())) < 1e-15);
    }

    #[test]
    fn symmetries_and_block_identity() {
        let (lat, v) = setup();
        let m = HfbModel::new(&lat, &v, 2.0);
        let g = BogoliubovMap::random(6, 3).state();
        let mf = m.mean_field(&g).unwrap();
        assert!(max_abs(&(&mf.h - mf.h.adjoint())) < 1e-15);
        assert!(max_abs(&(&mf.pairing + mf.pairing.transpose())) < 1e-15);
        let (dw, da) = m.rhs(&g).unwrap();
        let blk = m.rhs_block(&g.gamma()).unwrap();
        assert!(max_abs(&(blk.view((0, 0), (6, 6)) - &dw)) < 1e-12);
        assert!(max_abs(&(blk.view((0, 6), (6, 6)) - &da)) < 1e-12);
        assert!(dw.trace().norm() < 1e-12);
    }

    #[test]
    fn translation_invariant_exchange_is_convolution() {
        let lat = Lattice::new(1, 1, 1, vec![2], Some(1.0)).unwrap();
        let v = PotentialRegistry::default()
            .build("gaussian", &PotentialParams { v0: 1.0, width: Some(1.0) }, &lat)
            .unwrap();
        let mut g = QuasiFree::vacuum(3);
        let occ = [0.3, 0.9, 0.5];
        for (i, o) in occ.iter().enumerate() {
            g.omega[(i, i)] = Complex64::new(*o, 0.0);
        }
        let m = HfbModel::new(&lat, &v, 2.0);
        let x = m.mean_field(&g).unwrap().exchange;
        for k in -1i32..=1 {
            let mut want = 0.0;
            for q in -2i32..=2 {
                if (k - q).abs() <= 1 {
                    want += v.vhat(&[q]) * occ[(k - q + 1) as usize] / 2.0;
                }
            }
            assert!((x[((k + 1) as usize, (k + 1) as usize)].re - want).abs() < 1e-15);
        }
        assert!(max_abs(&CMat::from_fn(3, 3, |r, c| if r == c { Complex64::new(0.0, 0.0) } else { x[(r, c)] })) < 1e-15);
    }

    #[test]
    fn hb_drops_exchange_and_pairing() {
        let (lat, v) = setup();
        let g = BogoliubovMap::random(6, 3).state();
        let full = HfbModel::new(&lat, &v, 2.0).mean_field(&g).unwrap();
        let hb = HfbModel::new(&lat, &v, 2.0).with_flags(Variant::Hb.flags()).mean_field(&g).unwrap();
        assert_eq!(hb.pairing.norm(), 0.0);
        assert!(max_abs(&(hb.h - (full.h + full.exchange))) < 1e-14);
    }
}
