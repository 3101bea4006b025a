//! A spin-½ particle sent through beam splitter, phase shifter, beam splitter.
//!
//! The beam splitter is `U_BS = exp(−iπσy/4)` and the phase shifter
//! `U_phase(χ) = exp(−iχσx/2)`; the whole device acts as
//! `U_IF = U_BS · U_phase(χ) · U_BS`. Measuring the outgoing spin along `x`
//! shows fringes `½(1 ∓ sinθ cos(φ + χ))` whose contrast is `sinθ`, while
//! measuring along `z` reads off the path, `½(1 ∓ cosθ)`.
//!
//! # Phase-axis convention
//!
//! The asymmetric splitter couples the spin to an in-plane axis. We write it as
//! `n_χ = (cos(χ + χ_SP), −sin(χ + χ_SP), 0)`, i.e. polar angle π/2 and azimuth
//! `−(χ + χ_SP)`. With this choice `n_χ·s⃗(θ,φ) = |s| sinθ cos(φ + χ + χ_SP)`,
//! the same `cos(φ + χ)` fringe shape as the symmetric device, and the
//! intensity agrees with the explicit transition matrices
//! `T_a = ‖T_a‖ 𝟙`, `T_b = ‖T_b‖ U_IF† (n·σ) U_IF` taken with `n = x̂` rotated
//! by `χ_SP`.

use std::f64::consts::FRAC_PI_4;

use crate::qcore::{
    pauli, sigma_dot, Complementarity, ComplexMatrix, DensityMatrix, Projector, C64,
};
use crate::{Error, Result, Vec3};

/// Unit vector with polar angle `theta` and azimuth `phi`.
pub fn direction(theta: f64, phi: f64) -> Vec3 {
    Vec3::new(
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    )
}

/// Spin-½ state given by polar angles and an optional purity `|s|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinState {
    pub theta: f64,
    pub phi: f64,
    pub purity: f64,
}

impl SpinState {
    pub fn pure(theta: f64, phi: f64) -> Self {
        Self {
            theta,
            phi,
            purity: 1.0,
        }
    }

    pub fn mixed(theta: f64, phi: f64, purity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&purity) {
            return Err(Error::OutOfRange {
                name: "purity",
                value: purity,
            });
        }
        Ok(Self {
            theta,
            phi,
            purity,
        })
    }

    pub fn bloch(&self) -> Vec3 {
        direction(self.theta, self.phi) * self.purity
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::qubit(&self.bloch()).expect("|s| <= 1 by construction")
    }
}

/// Relative phase and branch weights of the device.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterferometerConfig {
    /// Phase picked up between the two splitters.
    pub chi: f64,
    /// Branch weights `‖T_a‖² : ‖T_b‖²` of the asymmetric splitter.
    pub splitting: (f64, f64),
    /// Phase of the asymmetric arm.
    pub chi_sp: f64,
}

impl InterferometerConfig {
    pub fn new(chi: f64, splitting: (f64, f64), chi_sp: f64) -> Result<Self> {
        let (a, b) = splitting;
        if a < 0.0 || b < 0.0 || !(a + b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::ZeroAmplitudes);
        }
        Ok(Self {
            chi,
            splitting,
            chi_sp,
        })
    }

    /// Symmetric splitter with phase `chi`.
    pub fn symmetric(chi: f64) -> Self {
        Self {
            chi,
            splitting: (1.0, 1.0),
            chi_sp: 0.0,
        }
    }

    pub fn complementarity(&self) -> Complementarity {
        Complementarity::from_weights(self.splitting.0, self.splitting.1)
            .expect("validated splitting")
    }

    /// In-plane axis `n_χ` coupled by the asymmetric arm.
    pub fn phase_axis(&self) -> Vec3 {
        let a = self.chi + self.chi_sp;
        Vec3::new(a.cos(), -a.sin(), 0.0)
    }
}

fn rotation(axis: usize, angle: f64) -> ComplexMatrix {
    // exp(−i angle σ/2) = cos(angle/2) 𝟙 − i sin(angle/2) σ
    let c = ComplexMatrix::identity(2).scale_re((angle / 2.0).cos());
    let s = pauli(axis).scale(C64::new(0.0, -(angle / 2.0).sin()));
    &c + &s
}

/// `U_BS = exp(−iπσy/4)`
pub fn beam_splitter() -> ComplexMatrix {
    let c = ComplexMatrix::identity(2).scale_re(FRAC_PI_4.cos());
    let s = pauli(1).scale(C64::new(0.0, -FRAC_PI_4.sin()));
    &c + &s
}

/// `U_phase(χ) = exp(−iχσx/2)`
pub fn phase_shifter(chi: f64) -> ComplexMatrix {
    rotation(0, chi)
}

/// `U_IF = U_BS · U_phase(χ) · U_BS`
pub fn device_unitary(chi: f64) -> ComplexMatrix {
    let bs = beam_splitter();
    &(&bs * &phase_shifter(chi)) * &bs
}

pub fn evolve(cfg: &InterferometerConfig, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: rho.dim(),
        });
    }
    rho.evolve(&device_unitary(cfg.chi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn unit(self) -> Vec3 {
        match self {
            Axis::X => Vec3::x(),
            Axis::Y => Vec3::y(),
            Axis::Z => Vec3::z(),
        }
    }
}

/// Output port: `Plus` projects onto `(1 + σ)/2`, `Minus` onto `(1 − σ)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Port {
    Plus,
    Minus,
}

impl Port {
    pub fn sign(self) -> f64 {
        match self {
            Port::Plus => 1.0,
            Port::Minus => -1.0,
        }
    }
}

/// Probability of leaving through `port` when measuring along `axis`.
pub fn fringe(cfg: &InterferometerConfig, state: &SpinState, axis: Axis, port: Port) -> f64 {
    let out = evolve(cfg, &state.density()).expect("qubit state");
    let proj = Projector::along(&(axis.unit() * port.sign())).expect("unit axis");
    proj.probability(&out)
}

/// Contrast `(max − min)/(max + min)` of the x-port fringe, extracted from
/// a uniform scan of `steps` phases by a first-harmonic fit.
pub fn fringe_visibility(state: &SpinState, port: Port, steps: usize) -> f64 {
    assert!(steps >= 3);
    let (mut mean, mut a_cos, mut a_sin) = (0.0, 0.0, 0.0);
    for k in 0..steps {
        let chi = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
        let p = fringe(&InterferometerConfig::symmetric(chi), state, Axis::X, port);
        mean += p;
        a_cos += p * chi.cos();
        a_sin += p * chi.sin();
    }
    let n = steps as f64;
    mean /= n;
    let amplitude = 2.0 * (a_cos * a_cos + a_sin * a_sin).sqrt() / n;
    amplitude / mean
}

/// Intensity of the asymmetric device,
/// `(‖T_a‖² + ‖T_b‖²)(1 ∓ V n_χ·s⃗)`.
pub fn asymmetric_intensity(cfg: &InterferometerConfig, state: &SpinState, port: Port) -> f64 {
    let (wa, wb) = cfg.splitting;
    let v = cfg.complementarity().visibility;
    (wa + wb) * (1.0 - port.sign() * v * cfg.phase_axis().dot(&state.bloch()))
}

/// The explicit transition matrices behind [`asymmetric_intensity`].
///
/// `T_a = ‖T_a‖ 𝟙`, `T_b = ±‖T_b‖ U_IF† (n·σ) U_IF` with `n` the x-axis turned
/// by `χ_SP` about z; the sign selects the port.
pub fn asymmetric_transition_matrices(
    cfg: &InterferometerConfig,
    port: Port,
) -> (ComplexMatrix, ComplexMatrix) {
    let (wa, wb) = cfg.splitting;
    let u = device_unitary(cfg.chi);
    let n = Vec3::new(cfg.chi_sp.cos(), cfg.chi_sp.sin(), 0.0);
    let tb = &(&u.dagger() * &sigma_dot(&n)) * &u;
    (
        ComplexMatrix::identity(2).scale_re(wa.sqrt()),
        tb.scale_re(port.sign() * wb.sqrt()),
    )
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    use super::*;
    use crate::qcore::{bloch_expand, two_amplitude_intensity};

    #[test]
    fn flips_z_at_zero_phase() {
        let up = SpinState::pure(0.0, 0.0).density();
        let out = evolve(&InterferometerConfig::symmetric(0.0), &up).unwrap();
        let b = bloch_expand(&out);
        assert!((b.components()[2] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_stays_mixed() {
        let out = evolve(
            &InterferometerConfig::symmetric(0.0),
            &DensityMatrix::maximally_mixed(2),
        )
        .unwrap();
        assert!(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn rejects_qutrit() {
        let err = evolve(
            &InterferometerConfig::symmetric(0.0),
            &DensityMatrix::maximally_mixed(3),
        );
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn equator_dark_port() {
        let cfg = InterferometerConfig::symmetric(0.0);
        let p = fringe(&cfg, &SpinState::pure(FRAC_PI_2, 0.0), Axis::X, Port::Plus);
        assert!(p.abs() < 1e-15);
    }

    #[test]
    fn pole_path_probabilities() {
        let cfg = InterferometerConfig::symmetric(1.3);
        let s = SpinState::pure(0.0, 0.0);
        assert!(fringe(&cfg, &s, Axis::Z, Port::Plus).abs() < 1e-15);
        assert!((fringe(&cfg, &s, Axis::Z, Port::Minus) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fringe_contrast_is_sin_theta() {
        let v = fringe_visibility(&SpinState::pure(FRAC_PI_3, 0.4), Port::Plus, 64);
        assert!((v - FRAC_PI_3.sin()).abs() < 1e-9);
    }

    #[test]
    fn y_port_fringe() {
        // ½(1 ± sinθ sin(φ + χ))
        let (theta, phi, chi) = (0.7, 1.1, -0.4);
        let cfg = InterferometerConfig::symmetric(chi);
        let s = SpinState::pure(theta, phi);
        let p = fringe(&cfg, &s, Axis::Y, Port::Plus);
        assert!((p - 0.5 * (1.0 + theta.sin() * (phi + chi).sin())).abs() < 1e-12);
    }

    #[test]
    fn all_weight_in_one_branch_is_flat() {
        let cfg = InterferometerConfig::new(0.3, (1.0, 0.0), 0.2).unwrap();
        let a = asymmetric_intensity(&cfg, &SpinState::pure(0.1, 0.2), Port::Plus);
        let b = asymmetric_intensity(&cfg, &SpinState::pure(2.0, 4.0), Port::Plus);
        assert_eq!(a, 1.0);
        assert_eq!(b, 1.0);
    }

    #[test]
    fn balanced_splitter_aligned_state() {
        let cfg = InterferometerConfig::new(0.0, (1.0, 1.0), 0.0).unwrap();
        let s = SpinState::pure(FRAC_PI_2, 0.0); // s = n_χ = x̂
        assert!(asymmetric_intensity(&cfg, &s, Port::Plus).abs() < 1e-15);
        assert!((asymmetric_intensity(&cfg, &s, Port::Minus) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_matches_transition_matrices() {
        let v: f64 = 0.648;
        let wa = (1.0 + (1.0 - v * v).sqrt()) / 2.0;
        let cfg = InterferometerConfig::new(0.25, (wa, 1.0 - wa), -0.043 * PI).unwrap();
        for (theta, phi) in [(0.3, 0.1), (1.4, 2.9), (2.8, 5.0)] {
            let s = SpinState::pure(theta, phi);
            for port in [Port::Plus, Port::Minus] {
                let (ta, tb) = asymmetric_transition_matrices(&cfg, port);
                let direct = two_amplitude_intensity(&ta, &tb, &s.density()).unwrap();
                let closed = asymmetric_intensity(&cfg, &s, port);
                assert!((direct - closed).abs() < 1e-10, "{direct} vs {closed}");
            }
        }
    }

    #[test]
    fn rejects_empty_splitting() {
        assert!(InterferometerConfig::new(0.0, (0.0, 0.0), 0.0).is_err());
        assert!(SpinState::mixed(0.0, 0.0, 1.5).is_err());
    }
}
