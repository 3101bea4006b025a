//! Weak hyperon decays treated as open quantum channels.
//!
//! A nonleptonic spin-½ decay `B → b π` carries two interfering amplitudes
//! (S-wave and P-wave). Read as an interferometer, the pair fixes a visibility
//! and a predictability obeying `V² + P² = 1`; read as a quantum channel, the
//! decay is a two-outcome Kraus map, i.e. a spin measurement along the daughter
//! momentum that fires the "wrong" way with probability `(1 − α)/2`.
//!
//! Module map:
//!
//! * [`qcore`]: dense complex matrices, density matrices, generalized Gell-Mann
//!   Bloch expansions, the generic two-amplitude intensity.
//! * [`interferometer`]: a spin-½ particle through two beam splitters.
//! * [`decay`]: α/β/γ phenomenology, transition matrices and Kraus pairs.
//! * [`cascade`]: two sequential spin-½ decays as one channel.
//! * [`pairs`]: ΛΛ̄ singlet pairs, witness and correlation estimators, simplex geometry.
//! * [`inequalities`]: CH-form Bell expressions, their maximization, contextuality.
//! * [`mc`]: counter-based Monte Carlo event generation.
//! * [`dataio`]: parameter tables, event files, report rendering.

pub mod cascade;
pub mod dataio;
pub mod decay;
pub mod error;
pub mod inequalities;
pub mod interferometer;
pub mod mc;
pub mod pairs;
pub mod qcore;
pub mod quadrature;

pub use error::{Error, Result};

/// Real 3-vector used for Bloch vectors and momentum directions.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Tolerance used when checking that a direction has unit norm.
pub const UNIT_TOL: f64 = 1e-12;

pub(crate) fn check_unit(name: &'static str, n: &Vec3) -> Result<()> {
    let norm = n.norm();
    if (norm - 1.0).abs() > UNIT_TOL || !norm.is_finite() {
        return Err(Error::NotUnit { name, norm });
    }
    Ok(())
}

pub(crate) fn check_bloch3(s: &Vec3) -> Result<()> {
    let len = s.norm();
    if len > 1.0 + 1e-12 || !len.is_finite() {
        return Err(Error::PolarizationTooLong(len));
    }
    Ok(())
}
