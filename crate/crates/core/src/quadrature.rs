//! Tensor-product quadrature on coordinate boxes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Midpoint,
    GaussLegendre,
}

/// Nodes and weights on `[-1, 1]`.
pub fn nodes(rule: Rule, m: usize) -> Vec<(f64, f64)> {
    match rule {
        Rule::Midpoint => (0..m).map(|i| (-1.0 + (2 * i + 1) as f64 / m as f64, 2.0 / m as f64)).collect(),
        Rule::GaussLegendre => gauss_legendre(m),
    }
}

fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // Legendre recurrence for P_m(x) and P_m'(x).
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 0 {
                1.0
            } else if m == 1 {
                x
            } else {
                p1
            };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[m - 1 - i] = (x, w);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub points: usize,
    pub rule: Rule,
}

impl QuadratureSpec {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, points: usize, rule: Rule) -> Result<Self> {
        let q = QuadratureSpec { lo, hi, points, rule };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return domain("quadrature needs a positive point count");
        }
        if self.lo.len() != self.hi.len() || self.lo.iter().zip(&self.hi).any(|(a, b)| !(a < b)) {
            return domain("quadrature box must have lo < hi on every axis");
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn with_points(&self, points: usize) -> Self {
        QuadratureSpec { points, ..self.clone() }
    }

    /// Integral of `f` over the box.
    pub fn integrate<F: Fn(&[f64]) -> f64 + Sync>(&self, f: F) -> f64 {
        let d = self.dim();
        let m = self.points;
        let base = nodes(self.rule, m);
        let half: Vec<f64> = self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (b - a)).collect();
        let mid: Vec<f64> = self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let total = m.pow(d as u32);
        let scale: f64 = half.iter().product();
        (0..total)
            .into_par_iter()
            .map(|mut flat| {
                let mut x = vec![0.0; d];
                let mut w = scale;
                for a in (0..d).rev() {
                    let (u, wu) = base[flat % m];
                    flat /= m;
                    x[a] = mid[a] + half[a] * u;
                    w *= wu;
                }
                w * f(&x)
            })
            .sum()
    }
}
