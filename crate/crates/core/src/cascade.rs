//! Two sequential spin-½ decays, `μ → ν π → b π π`, folded into one channel.
//!
//! With normalized amplitudes the joint intensity is `τ₀ + τ⃗·s⃗` where
//!
//! ```text
//! τ₀ = 1 + α_μ α_ν (n̂_μ·n̂_ν)
//! τ⃗  = (α_μ + α_ν (1 − γ_μ)(n̂_μ·n̂_ν)) n̂_μ + α_ν γ_μ n̂_ν + α_ν β_μ (n̂_μ × n̂_ν)
//! ```
//!
//! so the cascade is again a two-outcome measurement along `±τ̂` with weights
//! `ω± = (1 ± |τ⃗|/τ₀)/2`. The coefficient written here as `γ_μ` is the signed
//! S/P imbalance of the first decay; it equals the predictability `P_μ`
//! whenever `γ_μ ≥ 0`, as for the Ξ decays.
//!
//! Both directions are taken in one common frame.

use std::f64::consts::PI;

use crate::decay::{transition_matrix, DecayParameters, KrausPair};
use crate::qcore::{ComplexMatrix, DensityMatrix};
use crate::{check_bloch3, check_unit, Result, Vec3};

/// Kraus data of the folded cascade for one pair of directions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CascadeKraus {
    pub tau0: f64,
    pub tau: Vec3,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub n_mu: Vec3,
    pub n_nu: Vec3,
}

impl CascadeKraus {
    /// `|τ⃗| / τ₀`, the analyzing power of the folded channel.
    pub fn asymmetry(&self) -> f64 {
        self.tau.norm() / self.tau0
    }

    /// The equivalent spin-½ Kraus pair (undefined axis when `τ⃗ = 0` is
    /// replaced by `n̂_μ`).
    pub fn kraus_pair(&self) -> KrausPair {
        let len = self.tau.norm();
        let axis = if len > 0.0 { self.tau / len } else { self.n_mu };
        KrausPair {
            omega_plus: self.omega_plus,
            omega_minus: self.omega_minus,
            w1: Vec3::zeros(),
            w2: axis,
        }
    }
}

pub fn cascade_tau(
    mu: &DecayParameters,
    nu: &DecayParameters,
    n_mu: &Vec3,
    n_nu: &Vec3,
) -> Result<CascadeKraus> {
    check_unit("n_mu", n_mu)?;
    check_unit("n_nu", n_nu)?;
    let c = n_mu.dot(n_nu);
    let tau0 = 1.0 + mu.alpha * nu.alpha * c;
    let tau = n_mu * (mu.alpha + nu.alpha * (1.0 - mu.gamma) * c)
        + n_nu * (nu.alpha * mu.gamma)
        + n_mu.cross(n_nu) * (nu.alpha * mu.beta);
    let ratio = if tau0 > 0.0 { tau.norm() / tau0 } else { 0.0 };
    Ok(CascadeKraus {
        tau0,
        tau,
        omega_plus: 0.5 * (1.0 + ratio),
        omega_minus: 0.5 * (1.0 - ratio),
        n_mu: *n_mu,
        n_nu: *n_nu,
    })
}

/// Joint density of `(n̂_μ, n̂_ν)`, normalized over both spheres:
/// `(τ₀ + τ⃗·s⃗)/(4π)²`.
pub fn cascade_pdf(
    mu: &DecayParameters,
    nu: &DecayParameters,
    s: &Vec3,
    n_mu: &Vec3,
    n_nu: &Vec3,
) -> Result<f64> {
    check_bloch3(s)?;
    let k = cascade_tau(mu, nu, n_mu, n_nu)?;
    Ok((k.tau0 + k.tau.dot(s)) / (16.0 * PI * PI))
}

/// The vector `v⃗` with `τ₀ + τ⃗·s⃗ = 1 + α_μ n̂_μ·s⃗ + v⃗·n̂_ν`; used to sample
/// `n̂_ν` given `n̂_μ`.
pub fn conditional_vector(mu: &DecayParameters, nu: &DecayParameters, s: &Vec3, n_mu: &Vec3) -> Vec3 {
    let ms = n_mu.dot(s);
    n_mu * (mu.alpha * nu.alpha + nu.alpha * (1.0 - mu.gamma) * ms)
        + s * (nu.alpha * mu.gamma)
        + s.cross(n_mu) * (nu.alpha * mu.beta)
}

/// `α_μ n̂_μ + α_ν n̂_ν`, the quantization axis in the large-predictability limit.
pub fn large_predictability_axis(
    mu: &DecayParameters,
    nu: &DecayParameters,
    n_mu: &Vec3,
    n_nu: &Vec3,
) -> Vec3 {
    n_mu * mu.alpha + n_nu * nu.alpha
}

/// Intensity of the channel built from the product of the two single-decay
/// Kraus pairs, `Σ_ab Tr(K^ν_a K^μ_b ρ K^μ_b† K^ν_a†)`, scaled by 4 so that it
/// is directly comparable with `τ₀ + τ⃗·s⃗`. It does not reproduce the cascade.
pub fn product_kraus_intensity(
    mu: &DecayParameters,
    nu: &DecayParameters,
    n_mu: &Vec3,
    n_nu: &Vec3,
    rho: &DensityMatrix,
) -> Result<f64> {
    let first = KrausPair::spin_half(mu.alpha, *n_mu)?.operators();
    let second = KrausPair::spin_half(nu.alpha, *n_nu)?.operators();
    let mut total = 0.0;
    for a in [&second.0, &second.1] {
        for b in [&first.0, &first.1] {
            let k: ComplexMatrix = a * b;
            total += k.sandwich(rho.matrix()).trace().re;
        }
    }
    Ok(4.0 * total)
}

/// `T_ν T_μ` for normalized amplitudes reconstructed from the parameters.
pub fn cascade_transition(
    mu: &DecayParameters,
    nu: &DecayParameters,
    n_mu: &Vec3,
    n_nu: &Vec3,
) -> Result<ComplexMatrix> {
    let t_mu = transition_matrix(&mu.to_amplitudes(), n_mu)?;
    let t_nu = transition_matrix(&nu.to_amplitudes(), n_nu)?;
    Ok(&t_nu * &t_mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decay::GammaSign;

    fn xi_minus() -> DecayParameters {
        // α = 0.458, β = 0.0326, γ = 0.8884 as stored magnitudes
        let t = (1.0 - 0.458f64.powi(2)).sqrt();
        DecayParameters::from_alpha_phi(0.458, (0.0326 / t).asin(), GammaSign::Positive).unwrap()
    }

    fn lambda() -> DecayParameters {
        DecayParameters::from_alpha_phi(0.642, -0.114, GammaSign::Positive).unwrap()
    }

    fn silent() -> DecayParameters {
        DecayParameters::from_alpha_phi(0.0, 0.0, GammaSign::Positive).unwrap()
    }

    #[test]
    fn second_asymmetry_off_reduces_to_single_decay() {
        let n_mu = Vec3::new(0.6, 0.0, 0.8);
        let n_nu = Vec3::new(0.0, 1.0, 0.0);
        let k = cascade_tau(&xi_minus(), &silent(), &n_mu, &n_nu).unwrap();
        assert_eq!(k.tau0, 1.0);
        assert!((k.tau - n_mu * xi_minus().alpha).norm() < 1e-15);
    }

    #[test]
    fn first_decay_without_analyzing_power() {
        let n_mu = Vec3::x();
        let n_nu = Vec3::new(0.0, 0.6, 0.8);
        let k = cascade_tau(&silent(), &lambda(), &n_mu, &n_nu).unwrap();
        assert!((k.tau - n_nu * lambda().alpha).norm() < 1e-15);
    }

    #[test]
    fn xi_chain_orthogonal_momenta() {
        let k = cascade_tau(&xi_minus(), &lambda(), &Vec3::x(), &Vec3::y()).unwrap();
        assert!((k.tau.norm() - 0.732).abs() < 1e-3, "|tau| = {}", k.tau.norm());
        assert!((k.omega_plus - 0.866).abs() < 1e-3);
        assert_eq!(k.omega_plus + k.omega_minus, 1.0);
    }

    #[test]
    fn unpolarized_pdf() {
        let n_mu = Vec3::new(0.0, 0.6, 0.8);
        let n_nu = Vec3::new(0.8, 0.0, 0.6);
        let p = cascade_pdf(&xi_minus(), &lambda(), &Vec3::zeros(), &n_mu, &n_nu).unwrap();
        let expected = (1.0 + 0.458 * lambda().alpha * 0.48) / (16.0 * PI * PI);
        assert!((p - expected).abs() < 1e-14);
    }

    #[test]
    fn no_asymmetry_is_uniform() {
        let p = cascade_pdf(&silent(), &silent(), &Vec3::z(), &Vec3::x(), &Vec3::z()).unwrap();
        assert!((p - 1.0 / (16.0 * PI * PI)).abs() < 1e-16);
    }

    #[test]
    fn pdf_rejects_long_polarization() {
        assert!(cascade_pdf(&silent(), &silent(), &Vec3::new(1.0, 1.0, 0.0), &Vec3::x(), &Vec3::z()).is_err());
    }

    #[test]
    fn approximation_close_for_xi_chain() {
        let (mu, nu) = (xi_minus(), lambda());
        let exact = cascade_tau(&mu, &nu, &Vec3::x(), &Vec3::y()).unwrap().tau;
        let approx = large_predictability_axis(&mu, &nu, &Vec3::x(), &Vec3::y());
        let angle = (exact.dot(&approx) / (exact.norm() * approx.norm())).acos();
        assert!(angle.to_degrees() < 5.0, "angle {}", angle.to_degrees());
    }

    #[test]
    fn approximation_exact_when_second_silent() {
        let n_mu = Vec3::new(0.0, 0.6, 0.8);
        let exact = cascade_tau(&xi_minus(), &silent(), &n_mu, &Vec3::x()).unwrap().tau;
        let approx = large_predictability_axis(&xi_minus(), &silent(), &n_mu, &Vec3::x());
        assert!((exact - approx).norm() < 1e-15);
    }

    #[test]
    fn approximation_residual_is_cross_term_when_gamma_one() {
        // γ_μ = 1 forces α_μ = β_μ = 0, so only α_ν n_ν survives and the
        // approximation is exact.
        let mu = DecayParameters::from_alpha_phi(0.0, 0.0, GammaSign::Positive).unwrap();
        let (n_mu, n_nu) = (Vec3::x(), Vec3::new(0.0, 0.6, 0.8));
        let exact = cascade_tau(&mu, &lambda(), &n_mu, &n_nu).unwrap().tau;
        let approx = large_predictability_axis(&mu, &lambda(), &n_mu, &n_nu);
        assert!((exact - approx).norm() < 1e-15);
    }

    #[test]
    fn conditional_vector_reproduces_tau() {
        let (mu, nu) = (xi_minus(), lambda());
        let s = Vec3::new(0.1, -0.5, 0.3);
        let n_mu = Vec3::new(2.0, 1.0, -2.0) / 3.0;
        let n_nu = Vec3::new(0.0, 0.6, -0.8);
        let k = cascade_tau(&mu, &nu, &n_mu, &n_nu).unwrap();
        let v = conditional_vector(&mu, &nu, &s, &n_mu);
        let lhs = k.tau0 + k.tau.dot(&s);
        let rhs = 1.0 + mu.alpha * n_mu.dot(&s) + v.dot(&n_nu);
        assert!((lhs - rhs).abs() < 1e-14);
    }
}
