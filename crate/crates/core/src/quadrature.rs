//! Gauss–Legendre rules.

use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Nodes and weights on an interval, all nodes strictly interior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl QuadratureRule {
    /// The `n`-point Gauss–Legendre rule on `(0, 1)`.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if !(2..=2048).contains(&n) {
            return Err(domain(format!("rule order must lie in 2..=2048, got {n}")));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // map (-1, 1) onto (0, 1)
            nodes[i] = 0.5 * (1.0 - x);
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_lo^hi f` with the rule mapped affinely onto `(lo, hi)`.
    pub fn integrate<F>(&self, lo: f64, hi: f64, f: F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let len = hi - lo;
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(lo + len * x)?;
        }
        Ok(acc * len)
    }
}
