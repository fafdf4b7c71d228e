//! Coupled system for the Hermite weight on the symmetric exterior region:
//! state (q, p, u, w) plus the accumulated log-probability, with the
//! resolvent values R(s) and R-tilde(s) as algebraic outputs.

use super::{integrate_to_scaled, neumann_init, SolverConfig, WeightHandling};
use crate::error::{Error, Result};
use crate::orthopoly::{OrthonormalBasis, WeightSpec};
use crate::quadrature::QuadratureRule;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussState {
    pub q: f64,
    pub p: f64,
    pub u: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct GaussSample {
    pub s: f64,
    pub state: GaussState,
    pub r: f64,
    pub r_tilde: f64,
    pub ln_e2: f64,
    /// Set when integration could not continue below some s* because the
    /// gap trajectory is a separatrix whose contraction outruns f64 (the
    /// combination beta0 - 2u collapses like s^{2N+1}). In that regime
    /// E2 below s*, ln_e2 is reported as the rigorous upper bound E2(s*): by
    /// monotonicity bounds E2 at every smaller s; R and R-tilde are NaN.
    pub clamped: bool,
}

impl GaussSample {
    pub fn e2(&self) -> f64 {
        self.ln_e2.exp()
    }
}

/// Continuation below a step-size failure is allowed only when the bound
/// value is already far below every acceptance tolerance.
pub(crate) const LN_CLAMP_FLOOR: f64 = -20.7;

/// R(s) from the state (the diagonal resolvent boundary value).
pub fn gauss_r(s: f64, st: &GaussState, n: usize) -> f64 {
    let b0 = (2.0 * n as f64).sqrt();
    st.q * st.q * (b0 + 2.0 * st.w) + st.p * st.p * (b0 - 2.0 * st.u) - 2.0 * s * st.q * st.p
        + 2.0 * st.q * st.q * st.p * st.p / s
}

/// R-tilde(s) = -q p / s.
pub fn gauss_r_tilde(s: f64, st: &GaussState) -> f64 {
    -st.q * st.p / s
}

/// State derivative. The two linear coefficients are equal here
/// (beta_0 = gamma_0 = sqrt(2N)).
pub fn gauss_rhs(s: f64, st: &GaussState, n: usize) -> Result<GaussState> {
    if s == 0.0 {
        return Err(Error::domain("gauss_rhs", "singular point s = 0"));
    }
    let b0 = (2.0 * n as f64).sqrt();
    Ok(GaussState {
        q: -s * st.q + st.p * (b0 - 2.0 * st.u) + 2.0 * st.q * st.q * st.p / s,
        p: s * st.p - st.q * (b0 + 2.0 * st.w) - 2.0 * st.q * st.p * st.p / s,
        u: -2.0 * st.q * st.q,
        w: -2.0 * st.p * st.p,
    })
}

/// Conserved combination pq - uw - (sqrt(2N)/2)(u - w); zero on trajectories.
pub fn gauss_invariant(st: &GaussState, n: usize) -> f64 {
    let b0 = (2.0 * n as f64).sqrt();
    st.p * st.q - st.u * st.w - 0.5 * b0 * (st.u - st.w)
}

/// Guarded start of integration: the kernel tail is below 1e-14 here.
pub fn default_start(n: usize) -> f64 {
    (2.0 * n as f64).sqrt() + 5.0
}

/// Asymptotic initial data at large s0: Q0 ~ phi, P0 ~ psi, u and w from
/// tail quadrature of phi^2 and psi^2 over both intervals.
pub fn gauss_init(n: usize, s0: f64) -> Result<(GaussState, f64)> {
    let basis = OrthonormalBasis::new(WeightSpec::Hermite, n)?;
    if basis.kernel_diag(s0) >= 1e-14 {
        return Err(Error::precondition(
            "gauss_init",
            format!("kernel tail K({s0}, {s0}) = {} not below 1e-14; start further out", basis.kernel_diag(s0)),
        ));
    }
    let rule = QuadratureRule::legendre(120)?;
    let reach = s0 + 12.0;
    let mut nodes = rule.mapped(-reach, -s0);
    nodes.extend(rule.mapped(s0, reach));
    let init = neumann_init(&basis, &nodes, &[s0], WeightHandling::Weighted)?;
    let state = GaussState { q: init.q[0], p: init.p[0], u: init.u, w: init.w };
    Ok((state, init.ln_e2))
}

/// Integrate the coupled system inward from `s0` and report the trajectory
/// on `grid` (strictly increasing values below the start point).
///
/// Internally the inner products ride in log form: the combinations
/// bu = beta0 - 2u and cw = gamma0 + 2w stay positive, bu collapses like
/// s^{2N+1} toward the origin, and every occurrence in the system is a
/// product with the (inversely growing) endpoint values. Additive u, w
/// coordinates would have to resolve bu ~ 1e-13 as a difference of O(1)
/// numbers; the log coordinates keep full relative accuracy instead.
pub fn integrate_gauss(n: usize, grid: &[f64], cfg: &SolverConfig) -> Result<Vec<GaussSample>> {
    cfg.validate()?;
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("integrate_gauss", "grid must be strictly increasing"));
    }
    if grid[0] <= 0.0 {
        return Err(Error::domain("integrate_gauss", "grid points must be positive"));
    }
    let s0 = if cfg.s_start.is_nan() { default_start(n) } else { cfg.s_start };
    if *grid.last().unwrap() > s0 {
        return Err(Error::domain("integrate_gauss", format!("grid exceeds the start point {s0}")));
    }
    let b0 = (2.0 * n as f64).sqrt();
    let (state, ln_e2) = gauss_init(n, s0)?;
    let bu0 = b0 - 2.0 * state.u;
    let cw0 = b0 + 2.0 * state.w;
    if !(bu0 > 0.0 && cw0 > 0.0) {
        return Err(Error::precondition("integrate_gauss", "initial data violates bu, cw > 0"));
    }
    // state vector: q, p, ln(beta0 - 2u), ln(gamma0 + 2w), ln E2
    let mut y = [state.q, state.p, bu0.ln(), cw0.ln(), ln_e2];
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        if s == 0.0 {
            return Err(Error::domain("gauss_rhs", "singular point s = 0"));
        }
        let (q, p) = (y[0], y[1]);
        let bu = y[2].exp();
        let cw = y[3].exp();
        dy[0] = -s * q + p * bu + 2.0 * q * q * p / s;
        dy[1] = s * p - q * cw - 2.0 * q * p * p / s;
        dy[2] = 4.0 * q * q / bu;
        dy[3] = -4.0 * p * p / cw;
        dy[4] = 2.0 * (q * q * cw + p * p * bu - 2.0 * s * q * p + 2.0 * q * q * p * p / s);
        Ok(())
    };
    let mut out = Vec::with_capacity(grid.len());
    let mut t = s0;
    let mut clamped_from: Option<f64> = None;
    for &s in grid.iter().rev() {
        if clamped_from.is_none() {
            // q (or p) can park at a degenerate zero where both its value and
            // derivative are tiny; anchor its error floor to the slowly
            // varying product qp, which the first integral pins to O(1).
            let qp = (y[0] * y[1]).abs();
            let floor_q = (1e-11 * qp / (y[1].abs() + 1e-290)).max(1e-290);
            let floor_p = (1e-11 * qp / (y[0].abs() + 1e-290)).max(1e-290);
            let floors = [floor_q, floor_p, 1e-13, 1e-13, 1e-13];
            match integrate_to_scaled(&rhs, t, s, &mut y, cfg, Some(&floors)) {
                Ok(()) => {
                    t = s;
                }
                Err(e) => {
                    if y[4] < LN_CLAMP_FLOOR {
                        clamped_from = Some(t);
                    } else {
                        return Err(e);
                    }
                }
            }
        }
        if clamped_from.is_some() {
            let st = GaussState { q: y[0], p: y[1], u: 0.5 * (b0 - y[2].exp()), w: 0.5 * (y[3].exp() - b0) };
            out.push(GaussSample { s, state: st, r: f64::NAN, r_tilde: f64::NAN, ln_e2: y[4], clamped: true });
        } else {
            let st = GaussState { q: y[0], p: y[1], u: 0.5 * (b0 - y[2].exp()), w: 0.5 * (y[3].exp() - b0) };
            out.push(GaussSample { s, state: st, r: gauss_r(s, &st, n), r_tilde: gauss_r_tilde(s, &st), ln_e2: y[4], clamped: false });
        }
    }
    out.reverse();
    Ok(out)
}
