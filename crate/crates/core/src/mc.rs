//! Monte Carlo generation of daughter directions.
//!
//! Every event draws its randomness from a ChaCha8 stream keyed by
//! `(master seed, event id)`, so event `i` is the same no matter how the id
//! range is split across workers. All densities are linear in one cosine and
//! are sampled by inverting their quadratic CDF.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cascade::conditional_vector;
use crate::decay::DecayParameters;
use crate::{check_bloch3, Error, Result, Vec3};

/// What a direction in an event stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Single,
    Pair1,
    Pair2,
    CascadeMu,
    CascadeNu,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Single => "single",
            Role::Pair1 => "pair-1",
            Role::Pair2 => "pair-2",
            Role::CascadeMu => "cascade-mu",
            Role::CascadeNu => "cascade-nu",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "single" => Role::Single,
            "pair-1" => Role::Pair1,
            "pair-2" => Role::Pair2,
            "cascade-mu" => Role::CascadeMu,
            "cascade-nu" => Role::CascadeNu,
            _ => return None,
        })
    }
}

/// One sampled daughter direction.
#[derive(Clone, Debug, PartialEq)]
pub struct EventRecord {
    pub event_id: u64,
    pub role: Role,
    pub channel: Arc<str>,
    pub n: Vec3,
}

/// The two directions of one pair event.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairedEvent {
    pub event_id: u64,
    pub n1: Vec3,
    pub n2: Vec3,
}

/// Groups `pair-1`/`pair-2` records into events. Records of one event must be
/// adjacent, first particle first.
pub fn pair_up(records: &[EventRecord]) -> Result<Vec<PairedEvent>> {
    if records.len() % 2 != 0 {
        let last = records.last().map(|r| r.event_id).unwrap_or(0);
        return Err(Error::EventMismatch {
            event_id: last,
            reason: "odd number of pair records".into(),
        });
    }
    records
        .chunks_exact(2)
        .map(|c| {
            let (a, b) = (&c[0], &c[1]);
            if a.role != Role::Pair1 || b.role != Role::Pair2 {
                return Err(Error::EventMismatch {
                    event_id: a.event_id,
                    reason: format!(
                        "expected pair-1/pair-2 records, found {}/{}",
                        a.role.as_str(),
                        b.role.as_str()
                    ),
                });
            }
            if a.event_id != b.event_id {
                return Err(Error::EventMismatch {
                    event_id: a.event_id,
                    reason: format!("pair partner has id {}", b.event_id),
                });
            }
            Ok(PairedEvent {
                event_id: a.event_id,
                n1: a.n,
                n2: b.n,
            })
        })
        .collect()
}

/// Independent random stream for one event.
pub fn event_stream(seed: u64, event_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(event_id);
    rng
}

/// Inverse CDF of `f(c) = (1 + a c)/2` on `[−1, 1]`, `|a| ≤ 1`.
///
/// Solves `a c² + 2c + (2 − a − 4u) = 0` in the rationalized form
/// `c = (4u + a − 2)/(1 + √((1 − a)² + 4au))`, which stays accurate as `a → 0`.
pub fn linear_cosine_inverse_cdf(a: f64, u: f64) -> f64 {
    let disc = ((1.0 - a) * (1.0 - a) + 4.0 * a * u).max(0.0);
    ((4.0 * u + a - 2.0) / (1.0 + disc.sqrt())).clamp(-1.0, 1.0)
}

/// CDF of the same density.
pub fn linear_cosine_cdf(a: f64, c: f64) -> f64 {
    (c + 1.0) / 2.0 + a * (c * c - 1.0) / 4.0
}

/// Any two unit vectors completing `axis` to a right-handed frame.
fn frame(axis: &Vec3) -> (Vec3, Vec3) {
    let helper = if axis.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = axis.cross(&helper).normalize();
    let e2 = axis.cross(&e1);
    (e1, e2)
}

/// Direction with density `(1 + v⃗·n⃗)/4π` for `|v| ≤ 1`.
fn sample_linear<R: Rng + ?Sized>(v: &Vec3, rng: &mut R) -> Vec3 {
    let u: f64 = rng.random();
    let phi = 2.0 * PI * rng.random::<f64>();
    let len = v.norm();
    let (axis, slope) = if len > 0.0 {
        (v / len, len.min(1.0))
    } else {
        (Vec3::z(), 0.0)
    };
    let c = linear_cosine_inverse_cdf(slope, u);
    let sin = (1.0 - c * c).max(0.0).sqrt();
    let (e1, e2) = frame(&axis);
    (axis * c + e1 * (sin * phi.cos()) + e2 * (sin * phi.sin())).normalize()
}

/// Samples `n⃗` from `(1 + α s⃗·n⃗)/4π`.
pub fn sample_single<R: Rng + ?Sized>(params: &DecayParameters, s: &Vec3, rng: &mut R) -> Vec3 {
    sample_linear(&(s * params.alpha), rng)
}

/// Samples a singlet pair: `n̂₁` uniform, `n̂₂` with density `∝ 1 − k n̂₁·n̂₂`.
pub fn sample_pair<R: Rng + ?Sized>(k: f64, rng: &mut R) -> (Vec3, Vec3) {
    let n1 = sample_linear(&Vec3::zeros(), rng);
    let n2 = sample_linear(&(n1 * -k), rng);
    (n1, n2)
}

/// Samples `(n̂_μ, n̂_ν)` from the cascade density `∝ τ₀ + τ⃗·s⃗`: first the
/// marginal of `n̂_μ`, then `n̂_ν` from the exact conditional.
pub fn sample_cascade<R: Rng + ?Sized>(
    mu: &DecayParameters,
    nu: &DecayParameters,
    s: &Vec3,
    rng: &mut R,
) -> (Vec3, Vec3) {
    let n_mu = sample_single(mu, s, rng);
    let denom = 1.0 + mu.alpha * n_mu.dot(s);
    let v = if denom > 0.0 {
        conditional_vector(mu, nu, s, &n_mu) / denom
    } else {
        Vec3::zeros()
    };
    let n_nu = sample_linear(&v, rng);
    (n_mu, n_nu)
}

/// Physics model driving a run.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Single {
        channel: String,
        params: DecayParameters,
        polarization: Vec3,
    },
    Pair {
        channels: (String, String),
        k: f64,
    },
    Cascade {
        channels: (String, String),
        mu: DecayParameters,
        nu: DecayParameters,
        polarization: Vec3,
    },
}

impl Model {
    fn validate(&self) -> Result<()> {
        match self {
            Model::Single { polarization, .. } | Model::Cascade { polarization, .. } => {
                check_bloch3(polarization)
            }
            Model::Pair { k, .. } => {
                if k.abs() <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::OutOfRange { name: "k", value: *k })
                }
            }
        }
    }

    /// Records produced per event.
    pub fn records_per_event(&self) -> usize {
        match self {
            Model::Single { .. } => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    pub events: u64,
    pub model: Model,
    /// Worker count hint; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.events == 0 {
            return Err(Error::NoEvents);
        }
        self.model.validate()
    }
}

/// Records of one event.
pub fn sample_event(model: &Model, seed: u64, event_id: u64, channels: &Channels) -> Vec<EventRecord> {
    let mut rng = event_stream(seed, event_id);
    let rec = |role, channel: &Arc<str>, n| EventRecord {
        event_id,
        role,
        channel: channel.clone(),
        n,
    };
    match model {
        Model::Single {
            params,
            polarization,
            ..
        } => vec![rec(Role::Single, &channels.0, sample_single(params, polarization, &mut rng))],
        Model::Pair { k, .. } => {
            let (n1, n2) = sample_pair(*k, &mut rng);
            vec![rec(Role::Pair1, &channels.0, n1), rec(Role::Pair2, &channels.1, n2)]
        }
        Model::Cascade {
            mu,
            nu,
            polarization,
            ..
        } => {
            let (a, b) = sample_cascade(mu, nu, polarization, &mut rng);
            vec![rec(Role::CascadeMu, &channels.0, a), rec(Role::CascadeNu, &channels.1, b)]
        }
    }
}

/// Shared channel labels for the records of a run.
#[derive(Clone, Debug)]
pub struct Channels(pub Arc<str>, pub Arc<str>);

impl Channels {
    pub fn for_model(model: &Model) -> Self {
        match model {
            Model::Single { channel, .. } => {
                let c: Arc<str> = channel.as_str().into();
                Channels(c.clone(), c)
            }
            Model::Pair { channels, .. } | Model::Cascade { channels, .. } => {
                Channels(channels.0.as_str().into(), channels.1.as_str().into())
            }
        }
    }
}

const BLOCK: u64 = 4096;

/// Generates events `start..end` in id order.
pub fn generate_range(config: &SampleConfig, start: u64, end: u64) -> Vec<EventRecord> {
    let channels = Channels::for_model(&config.model);
    let blocks: Vec<(u64, u64)> = (start..end)
        .step_by(BLOCK as usize)
        .map(|b| (b, (b + BLOCK).min(end)))
        .collect();
    let run = || {
        blocks
            .par_iter()
            .map(|&(lo, hi)| {
                (lo..hi)
                    .flat_map(|id| sample_event(&config.model, config.seed, id, &channels))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    };
    let chunks = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| run()),
        None => run(),
    };
    chunks.into_iter().flatten().collect()
}

/// All events of a run, ids `0..N`, in id order.
pub fn generate(config: &SampleConfig) -> Result<Vec<EventRecord>> {
    config.validate()?;
    Ok(generate_range(config, 0, config.events))
}

/// Streams a run to `sink` in bounded memory, one block of events at a time.
pub fn generate_into<F>(config: &SampleConfig, mut sink: F) -> Result<()>
where
    F: FnMut(&[EventRecord]) -> Result<()>,
{
    config.validate()?;
    let span = BLOCK * 64;
    let mut start = 0;
    while start < config.events {
        let end = (start + span).min(config.events);
        sink(&generate_range(config, start, end))?;
        start = end;
    }
    Ok(())
}

/// Uniform direction, exposed for estimator null tests.
pub fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    sample_linear(&Vec3::zeros(), rng)
}
