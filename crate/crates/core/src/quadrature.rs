//! Product quadrature on the unit sphere: Gauss-Legendre in `cos θ` times a
//! uniform grid in `φ`.

use std::f64::consts::PI;

use crate::Vec3;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let pm1 = if n == 0 { 0.0 } else { p0 };
    let d = n as f64 * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

/// Quadrature points on the sphere with weights summing to `4π`.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    points: Vec<(Vec3, f64)>,
}

impl SphereGrid {
    pub fn new(n_cos: usize, n_phi: usize) -> Self {
        let (xs, ws) = gauss_legendre(n_cos);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut points = Vec::with_capacity(n_cos * n_phi);
        for (&c, &w) in xs.iter().zip(&ws) {
            let s = (1.0 - c * c).max(0.0).sqrt();
            for j in 0..n_phi {
                let phi = (j as f64 + 0.5) * dphi;
                points.push((Vec3::new(s * phi.cos(), s * phi.sin(), c), w * dphi));
            }
        }
        Self { points }
    }

    /// The 64 × 64 grid used for normalization and completeness checks.
    pub fn standard() -> Self {
        Self::new(64, 64)
    }

    pub fn points(&self) -> &[(Vec3, f64)] {
        &self.points
    }

    pub fn integrate<F: FnMut(&Vec3) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().map(|(n, w)| w * f(n)).sum()
    }
}
