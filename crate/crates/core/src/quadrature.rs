//! Gauss quadrature rules on the reference interval [-1, 1], built by
//! Golub-Welsch from the Jacobi matrix of the target weight.
//!
//! The Jacobi rule absorbs the factors (1-x)^alpha (1+x)^beta into the
//! weights so that integrands stay smooth even when the gap region touches
//! the support endpoints with a singular or non-analytic weight.

use crate::error::{Error, Result};
use crate::linalg::symtrid_eigen_first;
use crate::specfun::log_beta;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleKind {
    /// Plain Gauss-Legendre: integrates f itself.
    Legendre,
    /// Gauss-Jacobi: integrates (1-x)^alpha (1+x)^beta f with the weight
    /// factors folded into the rule weights.
    Jacobi { alpha: f64, beta: f64 },
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub order: usize,
    /// Nodes on [-1, 1], ascending.
    pub nodes: Vec<f64>,
    /// Positive weights, same order as `nodes`.
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn legendre(order: usize) -> Result<Self> {
        Self::build(RuleKind::Legendre, order)
    }

    pub fn jacobi(order: usize, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::domain(
                "QuadratureRule::jacobi",
                format!("exponents alpha = {alpha}, beta = {beta} must be finite and > -1"),
            ));
        }
        Self::build(RuleKind::Jacobi { alpha, beta }, order)
    }

    fn build(kind: RuleKind, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::domain("QuadratureRule", format!("order {order} < 2")));
        }
        let (alpha, beta) = match kind {
            RuleKind::Legendre => (0.0, 0.0),
            RuleKind::Jacobi { alpha, beta } => (alpha, beta),
        };
        let mut diag = vec![0.0; order];
        let mut off = vec![0.0; order - 1];
        diag[0] = if alpha + beta == 0.0 { (beta - alpha) / 2.0 } else { (beta - alpha) / (alpha + beta + 2.0) };
        for k in 1..order {
            let kf = k as f64;
            let denom = 2.0 * kf + alpha + beta;
            diag[k] = (beta * beta - alpha * alpha) / (denom * (denom + 2.0));
            // k = 1 with the (1 + alpha + beta) factor cancelled (0/0 at
            // alpha + beta = -1 otherwise, e.g. Chebyshev).
            let b2 = if k == 1 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / (denom * denom * (denom + 1.0))
            } else {
                4.0 * kf * (kf + alpha) * (kf + beta) * (kf + alpha + beta)
                    / (denom * denom * (denom + 1.0) * (denom - 1.0))
            };
            off[k - 1] = b2.sqrt();
        }
        let mu0 = ((alpha + beta + 1.0) * std::f64::consts::LN_2 + log_beta(alpha + 1.0, beta + 1.0)?).exp();
        let (nodes, firsts) = symtrid_eigen_first(&diag, &off)?;
        let mut weights: Vec<f64> = firsts.iter().map(|z| mu0 * z * z).collect();
        let mut nodes = nodes;
        if alpha == beta {
            // Enforce the exact reflection symmetry the weight has.
            let n = order;
            for i in 0..n / 2 {
                let v = 0.5 * (nodes[i] - nodes[n - 1 - i]);
                nodes[i] = v;
                nodes[n - 1 - i] = -v;
                let w = 0.5 * (weights[i] + weights[n - 1 - i]);
                weights[i] = w;
                weights[n - 1 - i] = w;
            }
            if n % 2 == 1 {
                nodes[n / 2] = 0.0;
            }
        }
        Ok(QuadratureRule { kind, order, nodes, weights })
    }

    /// Integrate over [a, b]. For a Jacobi rule this computes
    /// `int_a^b (b-x)^alpha (x-a)^beta f(x) dx`; for Legendre just `int f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let scale = match self.kind {
            RuleKind::Legendre => half,
            // (b-x) = half (1-u), (x-a) = half (1+u)
            RuleKind::Jacobi { alpha, beta } => half * half.powf(alpha) * half.powf(beta),
        };
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        scale * sum
    }

    /// Mapped nodes and effective weights on [a, b], with the same
    /// weight-absorption semantics as [`integrate`](Self::integrate).
    pub fn mapped(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let scale = match self.kind {
            RuleKind::Legendre => half,
            RuleKind::Jacobi { alpha, beta } => half * half.powf(alpha) * half.powf(beta),
        };
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| (mid + half * x, scale * w))
            .collect()
    }
}
