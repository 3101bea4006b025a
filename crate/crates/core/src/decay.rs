//! Nonleptonic spin-½ hyperon decays as two-amplitude processes.
//!
//! The transition matrix is `T = S 𝟙 + P n⃗·σ⃗`, with `n⃗` the daughter baryon
//! direction. The usual decay parameters
//!
//! ```text
//! α = 2 Re(S*P) / N,   β = 2 Im(S*P) / N,   γ = (|S|² − |P|²) / N,   N = |S|² + |P|²
//! ```
//!
//! map onto interferometer language as `V = √(α² + β²)`, `P = |γ|` and
//! `α = V cos χ_SP`, `β = V sin χ_SP`. Seen as a channel, the decay is the
//! two-outcome Kraus map `K± = √ω± Π(±n⃗)` with `ω± = (1 ± α)/2`: a spin
//! measurement along `n⃗` that reports the wrong sign with probability `ω₋`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::qcore::{sigma_dot, ComplexMatrix, DensityMatrix, Projector, C64};
use crate::quadrature::SphereGrid;
use crate::{check_bloch3, check_unit, Error, Result, Vec3};

const PARAM_TOL: f64 = 1e-12;

/// S-wave and P-wave amplitudes of one decay mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayAmplitudes {
    pub s: C64,
    pub p: C64,
}

impl DecayAmplitudes {
    pub fn new(s: C64, p: C64) -> Result<Self> {
        let n = s.norm_sqr() + p.norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroAmplitudes);
        }
        Ok(Self { s, p })
    }

    /// `|S|² + |P|²`
    pub fn weight(&self) -> f64 {
        self.s.norm_sqr() + self.p.norm_sqr()
    }

    pub fn normalized(&self) -> Self {
        let k = self.weight().sqrt();
        Self {
            s: self.s / k,
            p: self.p / k,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaSign {
    Positive,
    Negative,
}

impl GammaSign {
    pub fn of(gamma: f64) -> Self {
        if gamma < 0.0 {
            GammaSign::Negative
        } else {
            GammaSign::Positive
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            GammaSign::Positive => 1,
            GammaSign::Negative => -1,
        }
    }
}

/// Decay parameters together with their interferometric reading.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayParameters {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `tan φ = β/γ`.
    pub phi: f64,
    /// `atan2(β, α)`, the phase between the two amplitudes.
    pub chi_sp: f64,
    pub visibility: f64,
    pub predictability: f64,
}

impl DecayParameters {
    fn from_abg(alpha: f64, beta: f64, gamma: f64) -> Self {
        let visibility = alpha.hypot(beta);
        let transverse = (1.0 - alpha * alpha).max(0.0).sqrt();
        let phi = if transverse > PARAM_TOL {
            beta.atan2(gamma)
        } else {
            0.0
        };
        let chi_sp = if visibility > 0.0 { beta.atan2(alpha) } else { 0.0 };
        Self {
            alpha,
            beta,
            gamma,
            phi,
            chi_sp,
            visibility,
            predictability: gamma.abs(),
        }
    }

    pub fn from_amplitudes(a: &DecayAmplitudes) -> Result<Self> {
        let n = a.weight();
        if !(n > 0.0) {
            return Err(Error::ZeroAmplitudes);
        }
        let sp = a.s.conj() * a.p;
        Ok(Self::from_abg(
            2.0 * sp.re / n,
            2.0 * sp.im / n,
            (a.s.norm_sqr() - a.p.norm_sqr()) / n,
        ))
    }

    /// From the measured asymmetry `α` and phase `φ` (radians).
    ///
    /// `gamma_sign` is the stored sign of `γ`; it must agree with `cos φ`
    /// unless `γ` vanishes.
    pub fn from_alpha_phi(alpha: f64, phi: f64, gamma_sign: GammaSign) -> Result<Self> {
        if !(alpha.abs() <= 1.0) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
            });
        }
        if !phi.is_finite() {
            return Err(Error::OutOfRange {
                name: "phi",
                value: phi,
            });
        }
        let transverse = (1.0 - alpha * alpha).sqrt();
        let beta = transverse * phi.sin();
        let gamma = transverse * phi.cos();
        if gamma.abs() > PARAM_TOL && GammaSign::of(gamma) != gamma_sign {
            return Err(Error::GammaSignMismatch {
                stored: gamma_sign.as_i8(),
                phi,
            });
        }
        let mut params = Self::from_abg(alpha, beta, gamma);
        params.phi = phi;
        Ok(params)
    }

    /// Amplitudes with `S` real and nonnegative and `|S|² + |P|² = 1`.
    pub fn to_amplitudes(&self) -> DecayAmplitudes {
        let s_sq = ((1.0 + self.gamma) / 2.0).clamp(0.0, 1.0);
        let s = s_sq.sqrt();
        let p = if s > 1e-300 {
            C64::new(self.alpha, self.beta) / (2.0 * s)
        } else {
            C64::new(1.0, 0.0)
        };
        DecayAmplitudes {
            s: C64::new(s, 0.0),
            p,
        }
    }

    /// `χ_SP` folded into `(−π/2, π/2]`, i.e. `atan(β/α)`, the form in which
    /// published tables quote the phase.
    pub fn table_phase(&self) -> f64 {
        let mut x = self.chi_sp;
        while x > FRAC_PI_2 {
            x -= PI;
        }
        while x <= -FRAC_PI_2 {
            x += PI;
        }
        x
    }

    /// Worst violation among the algebraic identities tying the parameters
    /// together; zero up to rounding for any record built by this module.
    pub fn identity_defect(&self) -> f64 {
        let t = (1.0 - self.alpha * self.alpha).max(0.0).sqrt();
        let mut checks = vec![
            (self.alpha.powi(2) + self.beta.powi(2) + self.gamma.powi(2) - 1.0).abs(),
            (self.visibility.powi(2) + self.predictability.powi(2) - 1.0).abs(),
            (self.alpha - self.visibility * self.chi_sp.cos()).abs(),
            (self.beta - self.visibility * self.chi_sp.sin()).abs(),
            (self.predictability - self.gamma.abs()).abs(),
        ];
        if t > PARAM_TOL {
            checks.push((self.beta - t * self.phi.sin()).abs());
            checks.push((self.gamma - t * self.phi.cos()).abs());
        }
        checks.into_iter().fold(0.0, f64::max)
    }
}

/// Spin of the decaying particle, stored as `2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Spin(pub u32);

impl Spin {
    pub const HALF: Spin = Spin(1);

    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Squared length of the Kraus quantization vectors, `s(2s + 1)`.
    pub fn kraus_length_sq(self) -> f64 {
        self.value() * (self.0 as f64 + 1.0)
    }
}

/// One decay mode of a hyperon.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayChannel {
    pub parent: String,
    pub daughters: String,
    pub spin: Spin,
    pub branching: f64,
    pub params: DecayParameters,
}

impl DecayChannel {
    pub fn new(
        parent: impl Into<String>,
        daughters: impl Into<String>,
        branching: f64,
        params: DecayParameters,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&branching) {
            return Err(Error::OutOfRange {
                name: "branching",
                value: branching,
            });
        }
        Ok(Self {
            parent: parent.into(),
            daughters: daughters.into(),
            spin: Spin::HALF,
            branching,
            params,
        })
    }

    pub fn name(&self) -> String {
        format!("{} -> {}", self.parent, self.daughters)
    }
}

/// The two-outcome channel `K± = √ω± Π(w⃗₁ ± w⃗₂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrausPair {
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub w1: Vec3,
    pub w2: Vec3,
}

impl KrausPair {
    /// Spin-½ pair with `w⃗₁ = 0`, `w⃗₂ = axis` and asymmetry `asym = ω₊ − ω₋`.
    pub fn spin_half(asym: f64, axis: Vec3) -> Result<Self> {
        check_unit("Kraus axis", &axis)?;
        if !(asym.abs() <= 1.0) {
            return Err(Error::OutOfRange {
                name: "asymmetry",
                value: asym,
            });
        }
        Ok(Self {
            omega_plus: (1.0 + asym) / 2.0,
            omega_minus: (1.0 - asym) / 2.0,
            w1: Vec3::zeros(),
            w2: axis,
        })
    }

    pub fn asymmetry(&self) -> f64 {
        self.omega_plus - self.omega_minus
    }

    pub fn projectors(&self) -> (Projector, Projector) {
        let plus = (self.w1 + self.w2).normalize();
        let minus = (self.w1 - self.w2).normalize();
        (
            Projector::along(&plus).expect("unit"),
            Projector::along(&minus).expect("unit"),
        )
    }

    pub fn operators(&self) -> (ComplexMatrix, ComplexMatrix) {
        let (p, m) = self.projectors();
        (
            p.matrix().scale_re(self.omega_plus.sqrt()),
            m.matrix().scale_re(self.omega_minus.sqrt()),
        )
    }

    /// `ω₊ Tr(Π₊ρ) + ω₋ Tr(Π₋ρ)`
    pub fn intensity(&self, rho: &DensityMatrix) -> f64 {
        let (p, m) = self.projectors();
        self.omega_plus * p.probability(rho) + self.omega_minus * m.probability(rho)
    }

    /// Closed form `(1 + (w⃗₁ + (ω₊ − ω₋) w⃗₂)·s⃗)/(2s + 1)` for a spin-½ state.
    pub fn intensity_bloch(&self, s: &Vec3) -> f64 {
        0.5 * (1.0 + (self.w1 + self.w2 * self.asymmetry()).dot(s))
    }
}

/// `T = S 𝟙 + P n⃗·σ⃗`
pub fn transition_matrix(a: &DecayAmplitudes, n: &Vec3) -> Result<ComplexMatrix> {
    check_unit("decay direction", n)?;
    Ok(&ComplexMatrix::identity(2).scale(a.s) + &sigma_dot(n).scale(a.p))
}

/// Kraus form of the decay along `n`: `ω± = (1 ± α)/2`, projectors onto `±n⃗`.
///
/// `Tr(T ρ T†) = (2s + 1)(|S|² + |P|²) · [ω₊ Tr(Π₊ρ) + ω₋ Tr(Π₋ρ)]`.
pub fn kraus_decompose(a: &DecayAmplitudes, n: &Vec3) -> Result<KrausPair> {
    check_unit("decay direction", n)?;
    let params = DecayParameters::from_amplitudes(a)?;
    KrausPair::spin_half(params.alpha, *n)
}

/// Normalized angular density of the daughter direction,
/// `p(n⃗) = (1 + α s⃗·n⃗)/4π`, in 1/sr.
pub fn angular_pdf(params: &DecayParameters, s: &Vec3, n: &Vec3) -> Result<f64> {
    check_bloch3(s)?;
    check_unit("decay direction", n)?;
    Ok((1.0 + params.alpha * s.dot(n)) / (4.0 * PI))
}

/// `(1/4π) ∮ T†(n) T(n) dΩ`, which equals `(|S|² + |P|²) 𝟙`.
pub fn completeness_integral(a: &DecayAmplitudes, grid: &SphereGrid) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(2);
    for (n, w) in grid.points() {
        let t = transition_matrix(a, &n.normalize()).expect("grid points are unit");
        acc = &acc + &(&t.dagger() * &t).scale_re(*w / (4.0 * PI));
    }
    acc
}
