//! Painleve-V / Painleve-VI parametrizations of the reduced gap equations,
//! plus the soft-edge limit driven by Painleve-II.
//!
//! Transcendent trajectories are seeded by numerically inverting the rational
//! maps at one anchor point against closed-form data; nothing here guesses
//! Cauchy data.

pub mod pv;
pub mod pvi;
pub mod soft_edge;

use crate::error::{Error, Result};
use crate::ode::SolverConfig;

/// Parameters of the standard Painleve-V equation in x = s^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PVParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl PVParams {
    /// Instance attached to the Hermite exterior gap at size N.
    pub fn gue(n: usize, eps1: f64) -> PVParams {
        let nf = n as f64;
        PVParams {
            alpha: nf * nf / 8.0,
            beta: -(nf - eps1) * (nf - eps1) / 8.0,
            gamma: eps1 / 2.0,
            delta: -0.5,
        }
    }

    /// Instance with the extra integration constant K1 = 8K^2(N - 2K).
    pub fn generalized(n: usize, k: f64, eps1: f64) -> PVParams {
        let nf = n as f64;
        PVParams {
            alpha: (nf - 2.0 * k) * (nf + 6.0 * k) / 8.0,
            beta: -(nf - 2.0 * k - eps1) * (nf - 2.0 * k - eps1) / 8.0,
            gamma: (4.0 * k + eps1) / 2.0,
            delta: -0.5,
        }
    }
}

/// Parameters of the standard Painleve-VI equation in x = s^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PVIParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl PVIParams {
    /// Instance attached to the Jacobi gap families (alpha1 = -(2N+2a)/2,
    /// K1 the first-integral constant).
    pub fn jue(alpha1: f64, k1: f64, eps1: f64) -> PVIParams {
        let b = 1.0 + 2.0 * eps1 * alpha1;
        PVIParams { alpha: 1.0 / 8.0, beta: -b * b / 8.0, gamma: 0.0, delta: (k1 - 4.0 * alpha1 * alpha1) / 8.0 }
    }
}

/// Branch data: the sign gauge epsilon_1 and the generalized constant K
/// (entering as K1 = 8 K^2 (N - 2K)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchChoice {
    pub epsilon1: f64,
    pub k: f64,
}

impl BranchChoice {
    pub fn new(epsilon1: f64, k: f64) -> Result<Self> {
        if epsilon1 != 1.0 && epsilon1 != -1.0 {
            return Err(Error::domain("BranchChoice", format!("epsilon1 = {epsilon1} must be +1 or -1")));
        }
        Ok(BranchChoice { epsilon1, k })
    }

    pub fn k1(&self, n: usize) -> f64 {
        8.0 * self.k * self.k * (n as f64 - 2.0 * self.k)
    }
}

/// A sampled transcendent: w and w' on an increasing s-grid.
#[derive(Debug, Clone)]
pub struct TranscendentTrajectory {
    pub s: Vec<f64>,
    pub w: Vec<f64>,
    pub w_prime: Vec<f64>,
    /// Set when a movable pole or fixed singularity stopped the sweep early:
    /// (last good s, diagnostic).
    pub truncated: Option<(f64, String)>,
}

impl TranscendentTrajectory {
    pub fn is_complete(&self) -> bool {
        self.truncated.is_none()
    }
}

/// Shared sweep driver: from (s0, w0, w0') visit every grid point (both
/// directions), recording (w, w'); singular RHS evaluations truncate the
/// sweep with a flag rather than failing the whole call.
pub(crate) fn sweep<F>(rhs: &F, s0: f64, w0: f64, w0_prime: f64, grid: &[f64], cfg: &SolverConfig) -> Result<TranscendentTrajectory>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    if grid.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::domain("painleve sweep", "grid must be strictly increasing"));
    }
    let mut samples: Vec<(f64, f64, f64)> = Vec::with_capacity(grid.len() + 1);
    let mut truncated: Option<(f64, String)> = None;
    for direction in [false, true] {
        let targets: Vec<f64> = if direction {
            grid.iter().copied().filter(|&s| s > s0).collect()
        } else {
            grid.iter().copied().filter(|&s| s <= s0).rev().collect()
        };
        let mut y = [w0, w0_prime];
        let mut t = s0;
        for s in targets {
            match crate::ode::integrate_to(rhs, t, s, &mut y, cfg) {
                Ok(()) => {
                    samples.push((s, y[0], y[1]));
                    t = s;
                }
                Err(e) => {
                    if truncated.is_none() {
                        truncated = Some((t, e.to_string()));
                    }
                    break;
                }
            }
        }
    }
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(TranscendentTrajectory {
        s: samples.iter().map(|v| v.0).collect(),
        w: samples.iter().map(|v| v.1).collect(),
        w_prime: samples.iter().map(|v| v.2).collect(),
        truncated,
    })
}
