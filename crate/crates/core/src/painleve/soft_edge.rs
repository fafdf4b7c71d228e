//! The soft-edge limit: the scaled resolvent value R_soft(t) computed by two
//! routes that must agree: the sigma-form second-order equation integrated
//! directly, and the Painleve-II route r-tilde = -q^2/2 with q ~ Ai.

use crate::error::{Error, Result};
use crate::ode::{integrate_to, SolverConfig};
use crate::specfun::airy_ai_pair;

#[derive(Debug, Clone, Copy)]
pub struct SoftEdgeSample {
    pub t: f64,
    /// sigma-form route.
    pub r_soft: f64,
    /// Painleve-II route.
    pub r_soft_pii: f64,
    /// The transcendent q(t) of the PII route.
    pub q: f64,
    pub q_prime: f64,
}

/// Start of integration. The initial data -t Ai^2 + Ai'^2 carries a
/// cancellation error ~eps t Ai(t)^2 and a truncation error ~Ai(t)^4, both
/// amplified by exp(4/3 t^{3/2})-type factors on the way down; t = 6.5
/// balances them well below the 1e-7 route-agreement target.
pub const SOFT_EDGE_START: f64 = 6.5;

/// Integrate both soft-edge routes down from the Airy regime and report
/// them on `t_grid` (strictly increasing, within [-8, 8]).
pub fn soft_edge(t_grid: &[f64]) -> Result<Vec<SoftEdgeSample>> {
    if t_grid.is_empty() {
        return Ok(Vec::new());
    }
    if t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("soft_edge", "t grid must be strictly increasing"));
    }
    if t_grid[0] < -8.0 || *t_grid.last().unwrap() > 8.0 {
        return Err(Error::domain("soft_edge", "t grid must lie within [-8, 8]"));
    }
    let cfg = SolverConfig { rel_tol: 1e-12, abs_tol: 1e-24, ..Default::default() };
    let t1 = SOFT_EDGE_START.max(*t_grid.last().unwrap() + 1e-9);
    let (ai, aip) = airy_ai_pair(t1);

    // sigma-form state (R, R'): R'' = 2 sqrt(-R') sqrt(R'^2 - t R' + R),
    // the positive root (R is convex here since R' = -q^2 and q decreases).
    let sigma_rhs = |t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let (r, rp) = (y[0], y[1]);
        let m = -rp;
        if m < -1e-12 * r.abs().max(1e-30) {
            return Err(Error::BranchViolation { at: t, radicand: m });
        }
        let inner = rp * rp - t * rp + r;
        if inner < -1e-12 {
            return Err(Error::BranchViolation { at: t, radicand: inner });
        }
        dy[0] = rp;
        dy[1] = 2.0 * m.max(0.0).sqrt() * inner.max(0.0).sqrt();
        Ok(())
    };
    // PII state (q, q', R): q'' = 2q^3 + t q, R' = -q^2.
    let pii_rhs = |t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        dy[0] = y[1];
        dy[1] = 2.0 * y[0] * y[0] * y[0] + t * y[0];
        dy[2] = -y[0] * y[0];
        Ok(())
    };

    let mut y_sigma = [-t1 * ai * ai + aip * aip, -ai * ai];
    let mut y_pii = [ai, aip, -t1 * ai * ai + aip * aip];
    let mut out = Vec::with_capacity(t_grid.len());
    let mut t = t1;
    for &target in t_grid.iter().rev() {
        integrate_to(&sigma_rhs, t, target, &mut y_sigma, &cfg)?;
        integrate_to(&pii_rhs, t, target, &mut y_pii, &cfg)?;
        t = target;
        out.push(SoftEdgeSample { t: target, r_soft: y_sigma[0], r_soft_pii: y_pii[2], q: y_pii[0], q_prime: y_pii[1] });
    }
    out.reverse();
    Ok(out)
}

/// Diagonal of the Airy kernel: Ai'(t)^2 - t Ai(t)^2.
pub fn airy_kernel_diag(t: f64) -> f64 {
    let (ai, aip) = airy_ai_pair(t);
    aip * aip - t * ai * ai
}
