use rand::Rng;
use rayon::prelude::*;

use super::{evaluate_unchecked, BellSettings, InequalitySpec, ProbModel};
use crate::mc::event_stream;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerOptions {
    pub starts: usize,
    pub seed: u64,
    /// Compass search stops once the step falls below this (radians).
    pub min_step: f64,
    /// ... or once a full sweep improves the value by less than this.
    pub value_tol: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            starts: 32,
            seed: 0x5eed_be11,
            min_step: 1e-9,
            value_tol: 1e-7,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Maximum {
    pub value: f64,
    pub settings: BellSettings,
    /// Index of the start that produced the optimum.
    pub start: usize,
}

/// Best value of `spec` over all measurement directions.
pub fn maximize(spec: &InequalitySpec, model: &ProbModel) -> Maximum {
    maximize_with(spec, model, &OptimizerOptions::default())
}

/// Multistart compass search over the spherical angles of all settings.
///
/// Starts are seeded by index and run in parallel; the best value wins, ties
/// going to the lowest start index, so the result is independent of the
/// thread count.
pub fn maximize_with(spec: &InequalitySpec, model: &ProbModel, opts: &OptimizerOptions) -> Maximum {
    let (na, nb) = (spec.settings_a(), spec.settings_b());
    let dims = 2 * (na + nb);
    let objective = |x: &[f64]| evaluate_unchecked(spec, &BellSettings::from_angles(x, na, nb), model);

    let results: Vec<(f64, Vec<f64>)> = (0..opts.starts.max(1))
        .into_par_iter()
        .map(|start| {
            let mut rng = event_stream(opts.seed, start as u64);
            let x0: Vec<f64> = (0..dims)
                .map(|i| {
                    if i % 2 == 0 {
                        rng.random::<f64>().mul_add(2.0, -1.0).acos()
                    } else {
                        rng.random::<f64>() * std::f64::consts::TAU
                    }
                })
                .collect();
            compass_search(&objective, x0, opts)
        })
        .collect();

    let (start, (value, x)) = results
        .into_iter()
        .enumerate()
        .fold(None, |best: Option<(usize, (f64, Vec<f64>))>, (i, r)| match best {
            Some((_, (bv, _))) if bv >= r.0 => best,
            _ => Some((i, r)),
        })
        .expect("at least one start");
    Maximum {
        value,
        settings: BellSettings::from_angles(&x, na, nb),
        start,
    }
}

fn compass_search<F: Fn(&[f64]) -> f64>(f: &F, mut x: Vec<f64>, opts: &OptimizerOptions) -> (f64, Vec<f64>) {
    const MAX_SWEEPS: usize = 200;
    let mut best = f(&x);
    let mut step = 0.5;
    while step >= opts.min_step {
        let level_start = best;
        for _ in 0..MAX_SWEEPS {
            let before = best;
            for i in 0..x.len() {
                for dir in [1.0, -1.0] {
                    let old = x[i];
                    x[i] = old + dir * step;
                    let v = f(&x);
                    if v > best {
                        best = v;
                        break;
                    }
                    x[i] = old;
                }
            }
            if best <= before {
                break;
            }
        }
        // converged: a fine step no longer moves the value
        if step < 1e-5 && best - level_start < opts.value_tol * 1e-6 {
            break;
        }
        step *= 0.5;
    }
    (best, x)
}

/// Smallest `k` at which the maximal value of `spec` turns positive, by
/// bisection to within `1e-4`.
pub fn threshold(spec: &InequalitySpec) -> Result<f64> {
    threshold_with(spec, &OptimizerOptions::default(), 1e-4)
}

pub fn threshold_with(spec: &InequalitySpec, opts: &OptimizerOptions, tol: f64) -> Result<f64> {
    if !spec.has_joint_terms() {
        return Err(Error::NoThreshold);
    }
    let max_at = |k: f64| maximize_with(spec, &ProbModel { k }, opts).value;
    let (mut lo, mut hi) = (0.0, 1.0);
    let (f_lo, f_hi) = (max_at(lo), max_at(hi));
    if f_lo > spec.classical_bound || f_hi <= spec.classical_bound {
        return Err(Error::NoThreshold);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if max_at(mid) > spec.classical_bound {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
