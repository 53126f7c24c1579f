//! Gauss–Legendre rules on the reference cell `[0, 1]`.

use crate::error::{Error, Result};

/// A quadrature rule on `[0, 1]`.
#[derive(Clone, Debug)]
pub struct QuadRule {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadRule {
    /// The `q`-point Gauss–Legendre rule, exact for polynomials of degree
    /// `2q - 1`.
    pub fn gauss(q: usize) -> Result<QuadRule> {
        if !(1..=10).contains(&q) {
            return Err(Error::QuadratureRange(q));
        }
        let mut points = vec![0.0; q];
        let mut weights = vec![0.0; q];
        let n = q as f64;
        // Roots come in symmetric pairs; Newton from the Chebyshev-like guess.
        for i in 0..(q + 1) / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(q, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(q, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // map [-1, 1] -> [0, 1]
            points[i] = 0.5 * (1.0 - x);
            points[q - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[q - 1 - i] = 0.5 * w;
        }
        if q % 2 == 1 {
            points[q / 2] = 0.5;
        }
        Ok(QuadRule { points, weights })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integrates `f` over `[a, a + h]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, h: f64, f: F) -> f64 {
        h * self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(a + h * p))
            .sum::<f64>()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
