use super::matrix::ComplexMatrix;
use super::state::DensityMatrix;
use crate::{Error, Result};

/// Dimension-scaled Frobenius norm, `‖T‖ = √(Tr(T†T)/d)`, so that `‖𝟙‖ = 1`.
pub fn scaled_norm(t: &ComplexMatrix) -> f64 {
    (t.frobenius_sq() / t.dim() as f64).sqrt()
}

/// `Tr((T_a + T_b) ρ (T_a + T_b)†)`: intensity of two interfering amplitudes.
pub fn two_amplitude_intensity(
    ta: &ComplexMatrix,
    tb: &ComplexMatrix,
    rho: &DensityMatrix,
) -> Result<f64> {
    for m in [ta, tb] {
        if m.dim() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                got: m.dim(),
            });
        }
    }
    let total = ta + tb;
    Ok(total.sandwich(rho.matrix()).trace().re)
}

/// Visibility and predictability of a two-amplitude process.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complementarity {
    pub visibility: f64,
    pub predictability: f64,
}

impl Complementarity {
    /// From the two branch weights `‖T_a‖²` and `‖T_b‖²`.
    pub fn from_weights(wa: f64, wb: f64) -> Result<Self> {
        if wa < 0.0 || wb < 0.0 || !(wa + wb > 0.0) {
            return Err(Error::ZeroAmplitudes);
        }
        let total = wa + wb;
        Ok(Self {
            visibility: 2.0 * (wa * wb).sqrt() / total,
            predictability: (wa - wb).abs() / total,
        })
    }

    /// `V² + P²`, which is 1 for every two-amplitude process.
    pub fn sum_of_squares(&self) -> f64 {
        self.visibility.powi(2) + self.predictability.powi(2)
    }
}

pub fn complementarity_of(ta: &ComplexMatrix, tb: &ComplexMatrix) -> Result<Complementarity> {
    if ta.dim() != tb.dim() {
        return Err(Error::DimensionMismatch {
            expected: ta.dim(),
            got: tb.dim(),
        });
    }
    Complementarity::from_weights(scaled_norm(ta).powi(2), scaled_norm(tb).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{sigma_dot, C64};
    use crate::Vec3;

    #[test]
    fn identity_alone() {
        let rho = DensityMatrix::qubit(&Vec3::new(0.1, 0.2, 0.3)).unwrap();
        let i = two_amplitude_intensity(&ComplexMatrix::identity(2), &ComplexMatrix::zeros(2), &rho)
            .unwrap();
        assert!((i - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constructive_interference() {
        let rho = DensityMatrix::maximally_mixed(2);
        let id = ComplexMatrix::identity(2);
        let i = two_amplitude_intensity(&id, &id, &rho).unwrap();
        assert!((i - 4.0).abs() < 1e-15);
    }

    #[test]
    fn s_and_p_on_unpolarized() {
        let s = C64::new(0.3, -0.2);
        let p = C64::new(-0.5, 0.7);
        let n = Vec3::new(1.0, 2.0, -2.0) / 3.0;
        let ta = ComplexMatrix::identity(2).scale(s);
        let tb = sigma_dot(&n).scale(p);
        let i = two_amplitude_intensity(&ta, &tb, &DensityMatrix::maximally_mixed(2)).unwrap();
        assert!((i - (s.norm_sqr() + p.norm_sqr())).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(2);
        let err = two_amplitude_intensity(&ComplexMatrix::identity(3), &ComplexMatrix::zeros(2), &rho);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn scaled_norm_of_identity_is_one() {
        for d in 1..5 {
            assert!((scaled_norm(&ComplexMatrix::identity(d)) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_splitter() {
        let c = complementarity_of(&ComplexMatrix::identity(2), &sigma_dot(&Vec3::x())).unwrap();
        assert!((c.visibility - 1.0).abs() < 1e-15);
        assert!(c.predictability.abs() < 1e-15);
    }

    #[test]
    fn one_branch_only() {
        let c = complementarity_of(&ComplexMatrix::identity(2), &ComplexMatrix::zeros(2)).unwrap();
        assert_eq!((c.visibility, c.predictability), (0.0, 1.0));
    }

    #[test]
    fn lambda_visibility_gives_lambda_predictability() {
        // weights chosen so that V = 0.648
        let v: f64 = 0.648;
        let wa = (1.0 + (1.0 - v * v).sqrt()) / 2.0;
        let c = Complementarity::from_weights(wa, 1.0 - wa).unwrap();
        assert!((c.visibility - 0.648).abs() < 1e-12);
        assert!((c.predictability - 0.762).abs() < 5e-4);
    }

    #[test]
    fn zero_amplitudes_error() {
        let z = ComplexMatrix::zeros(2);
        assert!(matches!(complementarity_of(&z, &z), Err(Error::ZeroAmplitudes)));
    }
}
