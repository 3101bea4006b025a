use crate::qcore::{pauli, tensor, ComplexMatrix, DensityMatrix};

/// Noncontextual bound of the Mermin-Peres expression.
pub const CLASSICAL_CONTEXTUALITY_BOUND: f64 = 4.0;

/// Equal-asymmetry threshold quoted alongside the contextuality expression.
/// It does not follow from [`contextuality_value`], whose root is
/// [`equal_alpha_root`] ≈ 0.916; both are reported.
pub const QUOTED_EQUAL_ALPHA_THRESHOLD: f64 = 0.88;

/// `(α_Λ² + α_Λ̄²)² + 2 α_Λ³ α_Λ̄³`; contextuality shows when this exceeds 4.
pub fn contextuality_value(alpha_l: f64, alpha_lbar: f64) -> f64 {
    (alpha_l * alpha_l + alpha_lbar * alpha_lbar).powi(2) + 2.0 * (alpha_l * alpha_lbar).powi(3)
}

/// Equal asymmetry `α` at which [`contextuality_value`]`(α, α) = 4`, i.e. the
/// root of `4α⁴ + 2α⁶ = 4` in `[0, 1]`, by bisection.
pub fn equal_alpha_root() -> f64 {
    let f = |a: f64| contextuality_value(a, a) - CLASSICAL_CONTEXTUALITY_BOUND;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Equal asymmetry needed for a CHSH violation, `α² > 1/√2`.
pub fn equal_alpha_bell_bound() -> f64 {
    std::f64::consts::FRAC_1_SQRT_2.sqrt()
}

#[derive(Clone, Copy)]
enum Local {
    I,
    X,
    Y,
    Z,
}

impl Local {
    fn op(self, scale: f64) -> ComplexMatrix {
        match self {
            Local::I => ComplexMatrix::identity(2),
            Local::X => pauli(0).scale_re(scale),
            Local::Y => pauli(1).scale_re(scale),
            Local::Z => pauli(2).scale_re(scale),
        }
    }
}

/// The Mermin-Peres square; every row and column holds commuting observables.
const SQUARE: [[(Local, Local); 3]; 3] = {
    use Local::*;
    [
        [(X, I), (I, X), (X, X)],
        [(I, Y), (Y, I), (Y, Y)],
        [(X, Y), (Y, X), (Z, Z)],
    ]
};

/// Mermin-Peres sum `R₁ + R₂ + R₃ + C₁ + C₂ − C₃` on the singlet, with each
/// nontrivial single-particle factor scaled by `alpha_l` or `alpha_lbar`.
pub fn mermin_peres_scaled(alpha_l: f64, alpha_lbar: f64) -> f64 {
    let rho = DensityMatrix::singlet();
    let cell = |r: usize, c: usize| {
        let (a, b) = SQUARE[r][c];
        tensor(&a.op(alpha_l), &b.op(alpha_lbar))
    };
    let product = |cells: [ComplexMatrix; 3]| {
        let m = &(&cells[0] * &cells[1]) * &cells[2];
        rho.expectation(&m).re
    };
    let rows: f64 = (0..3).map(|r| product([cell(r, 0), cell(r, 1), cell(r, 2)])).sum();
    let cols = product([cell(0, 0), cell(1, 0), cell(2, 0)])
        + product([cell(0, 1), cell(1, 1), cell(2, 1)])
        - product([cell(0, 2), cell(1, 2), cell(2, 2)]);
    rows + cols
}

/// [`mermin_peres_scaled`] with one common scaling for both particles.
pub fn mermin_peres_quantum_value(scaling: f64) -> f64 {
    mermin_peres_scaled(scaling, scaling)
}
