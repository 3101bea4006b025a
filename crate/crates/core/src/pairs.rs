//! Spin-entangled ΛΛ̄ pairs observed through their weak decays.
//!
//! For a singlet the joint direction density is
//! `p(n̂₁, n̂₂) = (1 − k n̂₁·n̂₂)/(4π)²` with `k = α_Λ α_Λ̄`. Every spin
//! correlation `⟨σ_i ⊗ σ_j⟩` shows up multiplied by `k`, which shrinks the
//! correlation simplex by that factor. The singlet witness
//! `W = (𝟙⊗𝟙 + Σ σ_i⊗σ_i)/3` therefore reads `1/3 − k` and detects
//! entanglement for `k > 1/3`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix3};
use rayon::prelude::*;

use crate::decay::{transition_matrix, DecayParameters, GammaSign};
use crate::mc::PairedEvent;
use crate::qcore::{pauli, tensor, ComplexMatrix, DensityMatrix, PSD_TOL, STRUCT_TOL};
use crate::{check_unit, Error, Result, Vec3};

/// Minimum batch size accepted by the estimators.
pub const MIN_EVENTS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct PairModel {
    pub alpha_l: f64,
    pub alpha_lbar: f64,
    initial: DensityMatrix,
    singlet: bool,
}

impl PairModel {
    /// Singlet pair with the given decay asymmetries.
    pub fn singlet(alpha_l: f64, alpha_lbar: f64) -> Result<Self> {
        Self::with_state(alpha_l, alpha_lbar, DensityMatrix::singlet())
    }

    /// Singlet pair with asymmetries `(√|k|, ±√|k|)` giving the product `k`.
    pub fn from_k(k: f64) -> Result<Self> {
        let a = k.abs().sqrt();
        Self::singlet(a, a.copysign(k))
    }

    pub fn with_state(alpha_l: f64, alpha_lbar: f64, initial: DensityMatrix) -> Result<Self> {
        for (name, v) in [("alpha_L", alpha_l), ("alpha_Lbar", alpha_lbar)] {
            if !(v.abs() <= 1.0) {
                return Err(Error::OutOfRange { name, value: v });
            }
        }
        if initial.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: initial.dim(),
            });
        }
        let singlet = initial
            .matrix()
            .max_abs_diff(DensityMatrix::singlet().matrix())
            < STRUCT_TOL;
        Ok(Self {
            alpha_l,
            alpha_lbar,
            initial,
            singlet,
        })
    }

    pub fn k(&self) -> f64 {
        self.alpha_l * self.alpha_lbar
    }

    pub fn initial_state(&self) -> &DensityMatrix {
        &self.initial
    }

    pub fn is_singlet(&self) -> bool {
        self.singlet
    }
}

/// Joint direction density. Closed form for the singlet, tensor-product
/// channel otherwise.
pub fn joint_pdf(model: &PairModel, n1: &Vec3, n2: &Vec3) -> Result<f64> {
    check_unit("n1", n1)?;
    check_unit("n2", n2)?;
    if model.is_singlet() {
        Ok((1.0 - model.k() * n1.dot(n2)) / (16.0 * PI * PI))
    } else {
        joint_pdf_tensor(model, n1, n2)
    }
}

/// `Tr[(T₁ ⊗ T₂) ρ (T₁ ⊗ T₂)†]/(4π)²` with normalized amplitudes.
pub fn joint_pdf_tensor(model: &PairModel, n1: &Vec3, n2: &Vec3) -> Result<f64> {
    let amps = |alpha: f64| {
        DecayParameters::from_alpha_phi(alpha, 0.0, GammaSign::Positive).map(|p| p.to_amplitudes())
    };
    let t1 = transition_matrix(&amps(model.alpha_l)?, n1)?;
    let t2 = transition_matrix(&amps(model.alpha_lbar)?, n2)?;
    let t = tensor(&t1, &t2);
    Ok(t.sandwich(model.initial.matrix()).trace().re / (16.0 * PI * PI))
}

/// `(𝟙⊗𝟙 + k Σ σ_i⊗σ_i)/3`: the singlet witness with each spin factor
/// scaled by the analyzing power.
pub fn scaled_witness(k: f64) -> ComplexMatrix {
    let mut w = ComplexMatrix::identity(4);
    for i in 0..3 {
        w = &w + &tensor(&pauli(i), &pauli(i)).scale_re(k);
    }
    w.scale_re(1.0 / 3.0)
}

/// `Tr(W_k ρ)`; for the singlet this is `1/3 − k`, negative when entanglement
/// is detected.
pub fn witness_value(model: &PairModel) -> f64 {
    model.initial.expectation(&scaled_witness(model.k())).re
}

/// Value with its plug-in standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Mergeable first and second moments of a pair batch.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PairMoments {
    pub count: u64,
    pub sum_dot: f64,
    pub sum_dot_sq: f64,
    pub sum_outer: Matrix3<f64>,
    pub sum_outer_sq: Matrix3<f64>,
}

impl PairMoments {
    pub fn from_events(events: &[PairedEvent]) -> Self {
        let mut m = Self::default();
        for e in events {
            let d = e.n1.dot(&e.n2);
            let outer = e.n1 * e.n2.transpose();
            m.count += 1;
            m.sum_dot += d;
            m.sum_dot_sq += d * d;
            m.sum_outer += outer;
            m.sum_outer_sq += outer.component_mul(&outer);
        }
        m
    }

    pub fn merge(mut self, other: &Self) -> Self {
        self.count += other.count;
        self.sum_dot += other.sum_dot;
        self.sum_dot_sq += other.sum_dot_sq;
        self.sum_outer += other.sum_outer;
        self.sum_outer_sq += other.sum_outer_sq;
        self
    }

    /// Moments of a large batch, computed over fixed chunks in parallel and
    /// merged in chunk order so the result does not depend on thread count.
    pub fn from_events_par(events: &[PairedEvent]) -> Self {
        events
            .par_chunks(1 << 16)
            .map(Self::from_events)
            .collect::<Vec<_>>()
            .iter()
            .fold(Self::default(), |acc, m| acc.merge(m))
    }

    fn mean_and_error(sum: f64, sum_sq: f64, n: f64) -> (f64, f64) {
        let mean = sum / n;
        let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (mean, (var / n).sqrt())
    }
}

fn require_events(n: usize) -> Result<()> {
    if n < MIN_EVENTS {
        return Err(Error::TooFewEvents {
            needed: MIN_EVENTS,
            got: n,
        });
    }
    Ok(())
}

/// `1/3 + 3·mean(n̂₁·n̂₂)` and `3·sd/√N`.
pub fn witness_estimate(events: &[PairedEvent]) -> Result<Estimate> {
    require_events(events.len())?;
    Ok(witness_from_moments(&PairMoments::from_events_par(events)))
}

pub fn witness_from_moments(m: &PairMoments) -> Estimate {
    let (mean, err) = PairMoments::mean_and_error(m.sum_dot, m.sum_dot_sq, m.count as f64);
    Estimate {
        value: 1.0 / 3.0 + 3.0 * mean,
        std_error: 3.0 * err,
    }
}

/// Estimated spin-correlation matrix `⟨σ_i ⊗ σ_j⟩` (times the analyzing power
/// unless renormalized).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationEstimate {
    pub matrix: Matrix3<f64>,
    pub std_error: Matrix3<f64>,
    /// Divided by `α_Λ α_Λ̄`. Such values lean on the quantum description of
    /// the decay and cannot enter a Bell test.
    pub renormalized: bool,
}

/// `M_ij = 9·mean(n1_i n2_j)`, optionally divided by `α_Λ α_Λ̄`.
pub fn correlation_estimate(
    events: &[PairedEvent],
    model: &PairModel,
    renormalize: bool,
) -> Result<CorrelationEstimate> {
    require_events(events.len())?;
    if renormalize && model.k() == 0.0 {
        return Err(Error::ZeroAsymmetry);
    }
    let m = PairMoments::from_events_par(events);
    let n = m.count as f64;
    let scale = if renormalize { 9.0 / model.k() } else { 9.0 };
    let mut matrix = Matrix3::zeros();
    let mut std_error = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let (mean, err) =
                PairMoments::mean_and_error(m.sum_outer[(i, j)], m.sum_outer_sq[(i, j)], n);
            matrix[(i, j)] = scale * mean;
            std_error[(i, j)] = scale.abs() * err;
        }
    }
    Ok(CorrelationEstimate {
        matrix,
        std_error,
        renormalized: renormalize,
    })
}

/// A locally maximally mixed two-qubit state `(𝟙 + Σ c_i σ_i⊗σ_i)/4`,
/// labelled by its correlation diagonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexPoint {
    pub c: [f64; 3],
}

impl SimplexPoint {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c: [c1, c2, c3] }
    }

    /// The singlet corner `(−1, −1, −1)`.
    pub fn singlet() -> Self {
        Self::new(-1.0, -1.0, -1.0)
    }

    pub fn origin() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn state_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(4);
        for (i, &c) in self.c.iter().enumerate() {
            m = &m + &tensor(&pauli(i), &pauli(i)).scale_re(c);
        }
        m.scale_re(0.25)
    }

    pub fn l1_norm(&self) -> f64 {
        self.c.iter().map(|c| c.abs()).sum()
    }
}

pub fn simplex_shrink(p: &SimplexPoint, k: f64) -> SimplexPoint {
    SimplexPoint {
        c: p.c.map(|c| c * k),
    }
}

/// Whether the point is a physical state (inside the Bell-state tetrahedron).
pub fn in_state_tetrahedron(p: &SimplexPoint) -> bool {
    p.state_matrix().hermitian_eigenvalues()[0] >= PSD_TOL
}

/// Whether a physical point is separable, i.e. inside the octahedron
/// `|c₁| + |c₂| + |c₃| ≤ 1` bounded by the optimal witnesses.
pub fn is_separable_point(p: &SimplexPoint) -> Result<bool> {
    if !in_state_tetrahedron(p) {
        return Err(Error::InvalidState(format!(
            "simplex point {:?} is not a state",
            p.c
        )));
    }
    Ok(p.l1_norm() <= 1.0 + STRUCT_TOL)
}

/// Partial transpose on the second qubit of a two-qubit matrix.
pub fn partial_transpose(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let m = rho.matrix().as_matrix();
    let out = DMatrix::from_fn(4, 4, |r, c| {
        let (a, b) = (r / 2, r % 2);
        let (a2, b2) = (c / 2, c % 2);
        m[(a * 2 + b2, a2 * 2 + b)]
    });
    ComplexMatrix::new(out)
}

/// Peres-Horodecki test; exact for two qubits.
pub fn is_ppt(rho: &DensityMatrix) -> Result<bool> {
    Ok(partial_transpose(rho)?.hermitian_eigenvalues()[0] >= PSD_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::C64;

    #[test]
    fn uniform_without_asymmetry() {
        let m = PairModel::from_k(0.0).unwrap();
        let p = joint_pdf(&m, &Vec3::x(), &Vec3::new(0.0, 0.6, 0.8)).unwrap();
        assert!((p - 1.0 / (16.0 * PI * PI)).abs() < 1e-16);
    }

    #[test]
    fn parallel_directions() {
        let m = PairModel::from_k(0.46).unwrap();
        let p = joint_pdf(&m, &Vec3::z(), &Vec3::z()).unwrap();
        assert!((p - 0.54 / (16.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_tensor_channel() {
        let m = PairModel::singlet(0.642, -0.71).unwrap();
        let (a, b) = (Vec3::new(0.6, 0.0, 0.8), Vec3::new(0.0, -0.8, 0.6));
        let closed = joint_pdf(&m, &a, &b).unwrap();
        let tensor = joint_pdf_tensor(&m, &a, &b).unwrap();
        assert!((closed - tensor).abs() < 1e-15);
    }

    #[test]
    fn product_state_has_no_correlation() {
        let up = DensityMatrix::qubit(&Vec3::z()).unwrap();
        let down = DensityMatrix::qubit(&-Vec3::z()).unwrap();
        let rho = DensityMatrix::new(tensor(up.matrix(), down.matrix())).unwrap();
        let m = PairModel::with_state(0.6, 0.6, rho).unwrap();
        assert!(!m.is_singlet());
        let p = joint_pdf(&m, &Vec3::z(), &Vec3::z()).unwrap();
        // (1 + 0.6)(1 − 0.6)/(4π)²
        assert!((p - 1.6 * 0.4 / (16.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn witness_values() {
        assert!((witness_value(&PairModel::from_k(0.46).unwrap()) + 0.1267).abs() < 1e-4);
        assert!(witness_value(&PairModel::from_k(1.0 / 3.0).unwrap()).abs() < 1e-15);
        assert!((witness_value(&PairModel::from_k(0.0).unwrap()) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn witness_on_orthogonal_events() {
        let events: Vec<PairedEvent> = (0..200)
            .map(|i| PairedEvent {
                event_id: i,
                n1: Vec3::x(),
                n2: if i % 2 == 0 { Vec3::y() } else { Vec3::z() },
            })
            .collect();
        let est = witness_estimate(&events).unwrap();
        assert!((est.value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn too_few_events() {
        let events = vec![
            PairedEvent {
                event_id: 0,
                n1: Vec3::x(),
                n2: Vec3::x()
            };
            99
        ];
        assert!(matches!(witness_estimate(&events), Err(Error::TooFewEvents { .. })));
    }

    #[test]
    fn renormalize_needs_asymmetry() {
        let events = vec![
            PairedEvent {
                event_id: 0,
                n1: Vec3::x(),
                n2: Vec3::x()
            };
            100
        ];
        let m = PairModel::from_k(0.0).unwrap();
        assert!(matches!(
            correlation_estimate(&events, &m, true),
            Err(Error::ZeroAsymmetry)
        ));
        assert!(correlation_estimate(&events, &m, false).is_ok());
    }

    #[test]
    fn shrink() {
        let p = simplex_shrink(&SimplexPoint::singlet(), 0.46);
        assert_eq!(p.c, [-0.46, -0.46, -0.46]);
        let q = SimplexPoint::new(0.3, -0.2, 0.1);
        assert_eq!(simplex_shrink(&q, 1.0), q);
        assert_eq!(simplex_shrink(&q, 0.0).l1_norm(), 0.0);
    }

    #[test]
    fn tetrahedron_membership() {
        assert!(in_state_tetrahedron(&SimplexPoint::singlet()));
        assert!(!in_state_tetrahedron(&SimplexPoint::new(1.0, 1.0, 1.0)));
        assert!(in_state_tetrahedron(&SimplexPoint::origin()));
    }

    #[test]
    fn all_plus_point_has_eigenvalue_minus_half() {
        // eigenvalues of (𝟙 + Σσσ)/4 are 1/2 (×3) and −1/2 (singlet)
        let ev = SimplexPoint::new(1.0, 1.0, 1.0).state_matrix().hermitian_eigenvalues();
        assert!((ev[0] + 0.5).abs() < 1e-12);
        assert!(ev[1..].iter().all(|e| (e - 0.5).abs() < 1e-12));
    }

    #[test]
    fn separability() {
        let shrunk = simplex_shrink(&SimplexPoint::singlet(), 0.46);
        assert!(!is_separable_point(&shrunk).unwrap());
        let edge = simplex_shrink(&SimplexPoint::singlet(), 1.0 / 3.0);
        assert!(is_separable_point(&edge).unwrap());
        assert!(is_separable_point(&SimplexPoint::origin()).unwrap());
        assert!(is_separable_point(&SimplexPoint::new(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn octahedron_agrees_with_ppt() {
        for &k in &[0.0, 0.2, 0.33, 0.34, 0.5, 1.0] {
            let p = simplex_shrink(&SimplexPoint::singlet(), k);
            let rho = DensityMatrix::new(p.state_matrix()).unwrap();
            assert_eq!(is_separable_point(&p).unwrap(), is_ppt(&rho).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn singlet_is_npt() {
        assert!(!is_ppt(&DensityMatrix::singlet()).unwrap());
        let prod = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert!(is_ppt(&prod).unwrap());
    }
}
