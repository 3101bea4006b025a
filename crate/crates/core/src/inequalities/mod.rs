//! Bell inequalities in Clauser-Horne (probability) form, evaluated on the
//! statistics a singlet pair produces through imperfect spin measurements,
//! and the Mermin-Peres contextuality expression.
//!
//! The joint probability of two "+" outcomes along `a⃗`, `b⃗` is
//! `(1 − k a⃗·b⃗)/4` with `k = α_Λ α_Λ̄`, the single-outcome probabilities are
//! `1/2`. Every expression here is bounded by 0 in local realistic models.

mod contextuality;
mod optimize;

pub use contextuality::{
    contextuality_value, equal_alpha_bell_bound, equal_alpha_root, mermin_peres_quantum_value,
    mermin_peres_scaled, CLASSICAL_CONTEXTUALITY_BOUND, QUOTED_EQUAL_ALPHA_THRESHOLD,
};
pub use optimize::{maximize, maximize_with, threshold, threshold_with, Maximum, OptimizerOptions};

use std::fmt;

use crate::{Error, Result, Vec3};

/// Coefficient table of a CH-form Bell expression.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalitySpec {
    pub name: String,
    /// `joint[i][j]` multiplies `Prob(a⃗_i, b⃗_j)`.
    pub joint: Vec<Vec<f64>>,
    /// Coefficients of `Prob(a⃗_i)`.
    pub single_a: Vec<f64>,
    /// Coefficients of `Prob(b⃗_j)`.
    pub single_b: Vec<f64>,
    pub classical_bound: f64,
}

impl InequalitySpec {
    pub fn new(
        name: impl Into<String>,
        joint: Vec<Vec<f64>>,
        single_a: Vec<f64>,
        single_b: Vec<f64>,
    ) -> Result<Self> {
        let name = name.into();
        let nb = single_b.len();
        if joint.len() != single_a.len() || joint.iter().any(|row| row.len() != nb) {
            return Err(Error::SettingsMismatch {
                name,
                expected_a: single_a.len(),
                expected_b: nb,
                got_a: joint.len(),
                got_b: joint.first().map_or(0, Vec::len),
            });
        }
        Ok(Self {
            name,
            joint,
            single_a,
            single_b,
            classical_bound: 0.0,
        })
    }

    /// CHSH in CH form:
    /// `P11 + P12 + P21 − P22 − P(a1) − P(b1)`.
    pub fn i2() -> Self {
        Self::new(
            "I2",
            vec![vec![1.0, 1.0], vec![1.0, -1.0]],
            vec![-1.0, 0.0],
            vec![-1.0, 0.0],
        )
        .expect("static table")
    }

    /// Three settings per side (I3322):
    /// `P11 + P12 + P13 + P21 + P22 − P23 + P31 − P32 − P(a1) − 2P(b1) − P(b2)`.
    pub fn i3() -> Self {
        Self::new(
            "I3",
            vec![
                vec![1.0, 1.0, 1.0],
                vec![1.0, 1.0, -1.0],
                vec![1.0, -1.0, 0.0],
            ],
            vec![-1.0, 0.0, 0.0],
            vec![-2.0, -1.0, 0.0],
        )
        .expect("static table")
    }

    /// Four settings per side (I4422).
    pub fn i4() -> Self {
        Self::new(
            "I4",
            vec![
                vec![1.0, 1.0, 1.0, 1.0],
                vec![1.0, 1.0, 1.0, -1.0],
                vec![1.0, 1.0, -1.0, 0.0],
                vec![1.0, -1.0, 0.0, 0.0],
            ],
            vec![-1.0, 0.0, 0.0, 0.0],
            vec![-3.0, -2.0, -1.0, 0.0],
        )
        .expect("static table")
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "I2" | "CHSH" => Some(Self::i2()),
            "I3" => Some(Self::i3()),
            "I4" => Some(Self::i4()),
            _ => None,
        }
    }

    pub fn settings_a(&self) -> usize {
        self.single_a.len()
    }

    pub fn settings_b(&self) -> usize {
        self.single_b.len()
    }

    pub fn has_joint_terms(&self) -> bool {
        self.joint.iter().flatten().any(|&c| c != 0.0)
    }
}

/// Measurement directions for both particles.
#[derive(Clone, Debug, PartialEq)]
pub struct BellSettings {
    pub a: Vec<Vec3>,
    pub b: Vec<Vec3>,
}

impl BellSettings {
    pub fn new(a: Vec<Vec3>, b: Vec<Vec3>) -> Result<Self> {
        for v in a.iter().chain(&b) {
            crate::check_unit("setting", v)?;
        }
        Ok(Self { a, b })
    }

    /// Unit vectors from polar/azimuthal angle pairs, `a` settings first.
    pub fn from_angles(angles: &[f64], na: usize, nb: usize) -> Self {
        assert_eq!(angles.len(), 2 * (na + nb));
        let dir = |i: usize| {
            let (t, p) = (angles[2 * i], angles[2 * i + 1]);
            Vec3::new(t.sin() * p.cos(), t.sin() * p.sin(), t.cos())
        };
        Self {
            a: (0..na).map(dir).collect(),
            b: (na..na + nb).map(dir).collect(),
        }
    }
}

impl fmt::Display for BellSettings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_side = |v: &[Vec3]| {
            v.iter()
                .map(|n| format!("{:.6} {:.6} {:.6}", n.x, n.y, n.z))
                .collect::<Vec<_>>()
                .join(";")
        };
        write!(f, "a=[{}] b=[{}]", fmt_side(&self.a), fmt_side(&self.b))
    }
}

/// Singlet statistics seen through analyzers of strength `k = α_Λ α_Λ̄`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbModel {
    pub k: f64,
}

impl ProbModel {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::OutOfRange { name: "k", value: k });
        }
        Ok(Self { k })
    }
}

/// `Prob(+, +)` along `a⃗`, `b⃗`: `(1 − k a⃗·b⃗)/4`.
pub fn prob_joint(model: &ProbModel, a: &Vec3, b: &Vec3) -> f64 {
    0.25 * (1.0 - model.k * a.dot(b))
}

/// `Prob(+)` for either particle.
pub fn prob_single(_model: &ProbModel) -> f64 {
    0.5
}

pub fn evaluate(spec: &InequalitySpec, settings: &BellSettings, model: &ProbModel) -> Result<f64> {
    if settings.a.len() != spec.settings_a() || settings.b.len() != spec.settings_b() {
        return Err(Error::SettingsMismatch {
            name: spec.name.clone(),
            expected_a: spec.settings_a(),
            expected_b: spec.settings_b(),
            got_a: settings.a.len(),
            got_b: settings.b.len(),
        });
    }
    Ok(evaluate_unchecked(spec, settings, model))
}

pub(crate) fn evaluate_unchecked(spec: &InequalitySpec, settings: &BellSettings, model: &ProbModel) -> f64 {
    let mut total = 0.0;
    for (row, a) in spec.joint.iter().zip(&settings.a) {
        for (&c, b) in row.iter().zip(&settings.b) {
            if c != 0.0 {
                total += c * prob_joint(model, a, b);
            }
        }
    }
    let single = prob_single(model);
    total += single * spec.single_a.iter().sum::<f64>();
    total += single * spec.single_b.iter().sum::<f64>();
    total
}
