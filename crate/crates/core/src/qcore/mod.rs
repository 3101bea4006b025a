//! Dense complex linear algebra for small spin spaces.
//!
//! Everything here works on dimensions up to 16 (two spin-3/2 particles at
//! most), so matrices are stored densely and copied freely.

mod amplitude;
mod gell_mann;
mod matrix;
mod state;

pub use amplitude::{complementarity_of, scaled_norm, two_amplitude_intensity, Complementarity};
pub use gell_mann::{bloch_compose, bloch_expand, gell_mann_basis, BlochVector};
pub use matrix::{pauli, sigma_dot, tensor, ComplexMatrix, C64};
pub use state::{partial_trace, DensityMatrix, Projector, Subsystem};

/// Eigenvalues above this (negative) value are accepted as nonnegative.
pub const PSD_TOL: f64 = -1e-10;

/// Tolerance for Hermiticity, trace and idempotency checks.
pub const STRUCT_TOL: f64 = 1e-12;
