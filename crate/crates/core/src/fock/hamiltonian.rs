use super::space::FockSpace;
use super::sparse::SparseOp;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::potential::Potential;
use num_complex::Complex64;

/// Σ ε²|k|² n_k + (1/2N) Σ V̂(p) a*_{k+p,σ} a*_{k'-p,σ'} a_{k',σ'} a_{k,σ}
/// over retained modes, with N = `n_coupling`.
pub fn build_hamiltonian(space: &FockSpace, lattice: &Lattice, v: &Potential, n_coupling: f64) -> Result<SparseOp> {
    let l = lattice.n_modes();
    if space.n_modes() != l {
        return Err(Error::Dimension(format!("space has {} modes, lattice {l}", space.n_modes())));
    }
    let kin = lattice.kinetic_diag();
    let terms: Vec<(f64, Vec<Option<usize>>, Vec<Option<usize>>)> = v
        .support()
        .into_iter()
        .map(|(p, vp)| {
            let minus: Vec<i32> = p.iter().map(|c| -c).collect();
            (vp / (2.0 * n_coupling), lattice.shift_map(&p), lattice.shift_map(&minus))
        })
        .collect();
    // H is Hermitian, so row n is the conjugate of column n.
    let op = SparseOp::from_rows(space.dim(), |n| {
        let mut out = Vec::new();
        let e: f64 = (0..l).filter(|&b| n & (1 << b) != 0).map(|b| kin[b]).sum();
        if e != 0.0 {
            out.push((n, Complex64::new(e, 0.0)));
        }
        for b in 0..l {
            let Some((n1, s1)) = space.annihilate(b, n) else { continue };
            for c in 0..l {
                let Some((n2, s2)) = space.annihilate(c, n1) else { continue };
                for (coef, plus, minus) in &terms {
                    let (Some(b2), Some(c2)) = (plus[b], minus[c]) else { continue };
                    let Some((n3, s3)) = space.create(c2, n2) else { continue };
                    let Some((n4, s4)) = space.create(b2, n3) else { continue };
                    out.push((n4, Complex64::new(coef * s1 * s2 * s3 * s4, 0.0)));
                }
            }
        }
        out.iter_mut().for_each(|e| e.1 = e.1.conj());
        out
    });
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::sparse::number_operator;
    use crate::potential::{PotentialParams, PotentialRegistry};

    #[test]
    fn free_hamiltonian_is_kinetic() {
        let lat = Lattice::new(1, 1, 2, vec![1, 1], Some(0.7)).unwrap();
        let fs = FockSpace::new(lat.n_modes()).unwrap();
        let h = build_hamiltonian(&fs, &lat, &Potential::zero(&lat), 2.0).unwrap();
        let kin = lat.kinetic_diag();
        for n in 0..fs.dim() {
            let e: f64 = (0..6).filter(|b| n & (1 << b) != 0).map(|b| kin[b]).sum();
            let row: Vec<_> = h.row(n).collect();
            if e == 0.0 {
                assert!(row.is_empty());
            } else {
                assert_eq!(row, vec![(n, Complex64::new(e, 0.0))]);
            }
        }
    }

    #[test]
    fn hermitian_and_number_conserving() {
        let lat = Lattice::new(1, 1, 2, vec![1, 1], None).unwrap();
        let v = PotentialRegistry::default()
            .build("gaussian", &PotentialParams { v0: 1.3, width: Some(1.5) }, &lat)
            .unwrap();
        let fs = FockSpace::new(lat.n_modes()).unwrap();
        let h = build_hamiltonian(&fs, &lat, &v, 2.0).unwrap();
        assert!(h.hermiticity_residual() < 1e-14);
        assert_eq!(h.commutator_residual(&number_operator(&fs)), 0.0);
    }
}
