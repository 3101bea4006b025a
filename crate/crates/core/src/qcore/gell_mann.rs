//! Generalized Gell-Mann matrices and Bloch expansions.
//!
//! The basis is Hermitian, traceless and normalized as `Tr(Γ_i Γ_j) = 2 δ_ij`.
//! It is ordered as all symmetric generators, then all antisymmetric ones,
//! then the diagonal ones; for `d = 2` that is exactly `(σx, σy, σz)`.
//!
//! States are written `ρ = (𝟙 + b⃗·Γ⃗)/d`, so the components are
//! `b_i = (d/2) Tr(Γ_i ρ)` and pure states sit at `|b| = √(d(d−1)/2)`.

use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, C64};
use super::state::DensityMatrix;
use super::PSD_TOL;
use crate::{Error, Result};

/// Generalized Gell-Mann basis for dimension `dim` (`dim² − 1` matrices).
pub fn gell_mann_basis(dim: usize) -> Vec<ComplexMatrix> {
    assert!(dim >= 2, "Gell-Mann basis needs dim >= 2");
    let mut basis = Vec::with_capacity(dim * dim - 1);
    let pairs: Vec<(usize, usize)> = (0..dim)
        .flat_map(|j| (j + 1..dim).map(move |k| (j, k)))
        .collect();
    for &(j, k) in &pairs {
        let mut m = DMatrix::zeros(dim, dim);
        m[(j, k)] = C64::new(1.0, 0.0);
        m[(k, j)] = C64::new(1.0, 0.0);
        basis.push(ComplexMatrix::from_inner(m));
    }
    for &(j, k) in &pairs {
        let mut m = DMatrix::zeros(dim, dim);
        m[(j, k)] = C64::new(0.0, -1.0);
        m[(k, j)] = C64::new(0.0, 1.0);
        basis.push(ComplexMatrix::from_inner(m));
    }
    for l in 1..dim {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..l {
            m[(i, i)] = C64::new(norm, 0.0);
        }
        m[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        basis.push(ComplexMatrix::from_inner(m));
    }
    basis
}

/// Real coefficient vector of a state in the Gell-Mann basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector {
    dim: usize,
    components: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, components: Vec<f64>) -> Result<Self> {
        if dim < 2 || components.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch {
                expected: dim.saturating_mul(dim).saturating_sub(1),
                got: components.len(),
            });
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, components })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            components: vec![0.0; dim * dim - 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Length of a pure-state Bloch vector, `√(d(d−1)/2)`.
    pub fn pure_radius(dim: usize) -> f64 {
        ((dim * (dim - 1)) as f64 / 2.0).sqrt()
    }
}

pub fn bloch_expand(rho: &DensityMatrix) -> BlochVector {
    let d = rho.dim();
    let scale = d as f64 / 2.0;
    let components = gell_mann_basis(d)
        .iter()
        .map(|g| scale * rho.expectation(g).re)
        .collect();
    BlochVector { dim: d, components }
}

pub fn bloch_compose(b: &BlochVector) -> Result<DensityMatrix> {
    let d = b.dim;
    let mut m = ComplexMatrix::identity(d);
    for (g, &c) in gell_mann_basis(d).iter().zip(&b.components) {
        m = &m + &g.scale_re(c);
    }
    let m = m.scale_re(1.0 / d as f64);
    let min = m.hermitian_eigenvalues()[0];
    if min < PSD_TOL {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    DensityMatrix::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::pauli;
    use crate::Vec3;

    #[test]
    fn orthogonality_and_tracelessness() {
        for d in 2..=4 {
            let basis = gell_mann_basis(d);
            assert_eq!(basis.len(), d * d - 1);
            for (i, a) in basis.iter().enumerate() {
                assert!(a.is_hermitian(1e-15));
                assert!(a.trace().norm() < 1e-14);
                for (j, b) in basis.iter().enumerate() {
                    let expected = if i == j { 2.0 } else { 0.0 };
                    let got = (a * b).trace();
                    assert!((got.re - expected).abs() < 1e-12 && got.im.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn qubit_basis_is_pauli() {
        let basis = gell_mann_basis(2);
        for (axis, g) in basis.iter().enumerate() {
            assert_eq!(*g, pauli(axis));
        }
    }

    #[test]
    fn maximally_mixed_has_zero_vector() {
        let b = bloch_expand(&DensityMatrix::maximally_mixed(2));
        assert!(b.norm() < 1e-15);
    }

    #[test]
    fn spin_up_is_north_pole() {
        let up = DensityMatrix::qubit(&Vec3::z()).unwrap();
        let b = bloch_expand(&up);
        assert_eq!(b.components(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn compose_zero_and_north_pole() {
        let mixed = bloch_compose(&BlochVector::zero(2)).unwrap();
        assert!(mixed.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
        let up = bloch_compose(&BlochVector::new(2, vec![0.0, 0.0, 1.0]).unwrap()).unwrap();
        let expected = ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(up.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn too_long_vector_rejected() {
        let b = BlochVector::new(2, vec![0.0, 0.0, 1.2]).unwrap();
        assert!(matches!(bloch_compose(&b), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn pure_qutrit_on_radius() {
        let psi = [C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)];
        let rho = DensityMatrix::pure(&psi).unwrap();
        let b = bloch_expand(&rho);
        assert!((b.norm() - BlochVector::pure_radius(3)).abs() < 1e-12);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(BlochVector::new(3, vec![0.0; 3]).is_err());
    }
}
