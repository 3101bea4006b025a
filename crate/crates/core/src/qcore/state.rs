use nalgebra::DMatrix;

use super::matrix::{sigma_dot, ComplexMatrix, C64};
use super::{PSD_TOL, STRUCT_TOL};
use crate::{Error, Result, Vec3};

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let herm = m.hermiticity_defect();
        if herm > STRUCT_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {herm:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STRUCT_TOL || tr.im.abs() > STRUCT_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = m.hermitian_eigenvalues()[0];
        if min < PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(Self(m))
    }

    /// Normalizes `m` by its trace and validates the result.
    pub fn from_unnormalized(m: ComplexMatrix) -> Result<Self> {
        let tr = m.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr} is not positive")));
        }
        Self::new(m.hermitian_part().scale_re(1.0 / tr))
    }

    /// `𝟙/d`
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64))
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) state vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let v = nalgebra::DVector::from_row_slice(psi);
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if !(norm_sq > 0.0) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let m = &v * v.adjoint() / C64::new(norm_sq, 0.0);
        Self::new(ComplexMatrix::new(m)?)
    }

    /// Spin-½ state `(𝟙 + s⃗·σ⃗)/2` with `|s| ≤ 1`.
    pub fn qubit(s: &Vec3) -> Result<Self> {
        crate::check_bloch3(s)?;
        let m = &ComplexMatrix::identity(2) + &sigma_dot(s);
        Self::new(m.scale_re(0.5))
    }

    /// The singlet `(|↑↓⟩ − |↓↑⟩)/√2`.
    pub fn singlet() -> Self {
        let z = C64::new(0.0, 0.0);
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::pure(&[z, h, -h, z]).expect("singlet is a valid state")
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `Tr(A ρ)`
    pub fn expectation(&self, op: &ComplexMatrix) -> C64 {
        (op * &self.0).trace()
    }

    /// `U ρ U†` for a unitary `U`.
    pub fn evolve(&self, unitary: &ComplexMatrix) -> Result<Self> {
        if unitary.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: unitary.dim(),
            });
        }
        Self::new(unitary.sandwich(&self.0).hermitian_part())
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.0.hermitian_eigenvalues()
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }
}

/// An orthogonal projector, `P² = P = P†`.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector(ComplexMatrix);

impl Projector {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_hermitian(STRUCT_TOL) {
            return Err(Error::InvalidState("projector is not Hermitian".into()));
        }
        let sq = &m * &m;
        if sq.max_abs_diff(&m) > STRUCT_TOL {
            return Err(Error::InvalidState("projector is not idempotent".into()));
        }
        Ok(Self(m))
    }

    /// Spin-½ projector onto the unit direction `n`: `(𝟙 + n⃗·σ⃗)/2`.
    pub fn along(n: &Vec3) -> Result<Self> {
        crate::check_unit("projector axis", n)?;
        let m = &ComplexMatrix::identity(2) + &sigma_dot(n);
        Ok(Self(m.scale_re(0.5)))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// `Tr(P ρ)`
    pub fn probability(&self, rho: &DensityMatrix) -> f64 {
        rho.expectation(&self.0).re
    }
}

/// Which factor of a bipartite space to trace out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Traces out one factor of a state on `C^left ⊗ C^right`.
pub fn partial_trace(
    rho: &DensityMatrix,
    dims: (usize, usize),
    traced: Subsystem,
) -> Result<DensityMatrix> {
    let (left, right) = dims;
    if left == 0 || right == 0 || left * right != rho.dim() {
        return Err(Error::BadFactorization {
            dim: rho.dim(),
            left,
            right,
        });
    }
    let m = rho.matrix().as_matrix();
    let out = match traced {
        Subsystem::Second => DMatrix::from_fn(left, left, |i, j| {
            (0..right).map(|k| m[(i * right + k, j * right + k)]).sum()
        }),
        Subsystem::First => DMatrix::from_fn(right, right, |i, j| {
            (0..left).map(|k| m[(k * right + i, k * right + j)]).sum()
        }),
    };
    DensityMatrix::new(ComplexMatrix::from_inner(out).hermitian_part())
}
