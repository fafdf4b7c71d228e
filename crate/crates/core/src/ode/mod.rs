//! Coupled first-order systems for the resolvent boundary quantities, their
//! large/small gap initial data, the small-s series recursion, and residual
//! evaluators for the reduced second- and third-order equations.
//!
//! The coupled systems are the production route for E2; the reduced scalar
//! ODEs contain square-root branches and serve only as cross-checks through
//! [`residual`].

pub mod gauss;
pub mod jacobi;
pub mod residual;
pub mod series;

use crate::error::{Error, Result};
use crate::orthopoly::OrthonormalBasis;

/// Tolerances and integration window for the adaptive stepper.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Override for the start of integration (NaN picks the built-in guard).
    pub s_start: f64,
    pub s_end: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { rel_tol: 3e-12, abs_tol: 1e-18, max_step: 0.25, s_start: f64::NAN, s_end: f64::NAN }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 1e-13) {
            return Err(Error::domain("SolverConfig", format!("rel_tol {} below the 1e-13 floor", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.max_step > 0.0) {
            return Err(Error::domain("SolverConfig", "abs_tol and max_step must be positive"));
        }
        Ok(())
    }
}

// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_ERR: [f64; 7] = [
    71.0 / 57_600.0,
    0.0,
    -71.0 / 16_695.0,
    71.0 / 1_920.0,
    -17_253.0 / 339_200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Advance `y` from `t0` to `t1` with an embedded Dormand-Prince 5(4) pair.
/// Signed direction is inferred from the endpoints. On step-size underflow
/// the error reports the last good abscissa.
pub fn integrate_to<F>(f: &F, t0: f64, t1: f64, y: &mut [f64], cfg: &SolverConfig) -> Result<()>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    integrate_to_scaled(f, t0, t1, y, cfg, None)
}

/// Like [`integrate_to`] but with per-component absolute-error floors.
///
/// Components that start exponentially small and grow (endpoint values of
/// the weighted polynomial pair deep in a dead zone of the weight) need
/// pure relative control: any absolute slack is amplified by the growth
/// factor. Accumulators like ln E2 get an honest absolute floor instead.
pub fn integrate_to_scaled<F>(
    f: &F,
    t0: f64,
    t1: f64,
    y: &mut [f64],
    cfg: &SolverConfig,
    floors: Option<&[f64]>,
) -> Result<()>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let dim = y.len();
    if t0 == t1 {
        return Ok(());
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let floor = 1e-12 * span.max(t0.abs()).max(1.0);
    let mut t = t0;
    let mut h = (span * 1e-3).min(cfg.max_step) * dir;
    let mut k = vec![vec![0.0; dim]; 7];
    let mut y_stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];
    f(t, y, &mut k[0])?;
    loop {
        let remaining = t1 - t;
        if remaining.abs() <= 1e-14 * span.max(1.0) {
            return Ok(());
        }
        if h.abs() > remaining.abs() {
            h = remaining;
        }
        // Stages 2..7.
        for stage in 0..6 {
            for (i, ys) in y_stage.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, a) in DP_A[stage].iter().enumerate() {
                    acc += a * k[j][i];
                }
                *ys = y[i] + h * acc;
            }
            f(t + DP_C[stage] * h, &y_stage, &mut k[stage + 1])?;
        }
        // 5th-order solution is the last stage argument (FSAL structure).
        for (i, yn) in y_new.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, a) in DP_A[5].iter().enumerate() {
                acc += a * k[j][i];
            }
            *yn = y[i] + h * acc;
        }
        // Scaled error estimate.
        let mut err: f64 = 0.0;
        let mut err_arg = 0usize;
        for i in 0..dim {
            let mut e = 0.0;
            for (j, c) in DP_ERR.iter().enumerate() {
                e += c * k[j][i];
            }
            e *= h;
            let floor = floors.map_or(cfg.abs_tol, |fl| fl[i]);
            // The |h y'| term keeps the scale meaningful when a component
            // crosses zero inside the step.
            let local = y[i].abs().max(y_new[i].abs()).max((h * k[0][i]).abs());
            let scale = floor + cfg.rel_tol * local;
            if (e / scale).abs() > err {
                err = (e / scale).abs();
                err_arg = i;
            }
        }
        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&y_new);
            k.swap(0, 6);
            // Accepted steps never shrink h: with error sources that do not
            // scale with h (near-degenerate zero crossings), a sub-unit
            // factor here would decay h geometrically to the floor.
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(1.0, 5.0) };
            h = (h * grow).clamp(-cfg.max_step, cfg.max_step);
            if h == 0.0 {
                h = floor * dir;
            }
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
        if h.abs() < floor {
            return Err(Error::StepUnderflow {
                at: t,
                message: format!(
                    "required step {h:e} below floor {floor:e}; rejecting component {err_arg} with err {err:.3e}, y = {:.6e}",
                    y[err_arg]
                ),
            });
        }
    }
}

/// Initial data for the coupled systems when the eigenvalue-free region is
/// still small enough that the resolvent is a short Neumann series in K.
///
/// Corrections through K^2 are kept, so the state error is O((tr K)^3) and
/// the log-determinant error O((tr K)^4).
#[derive(Debug, Clone)]
pub(crate) struct NeumannInit {
    /// Q_0 at each requested endpoint.
    pub q: Vec<f64>,
    /// P_0 at each requested endpoint.
    pub p: Vec<f64>,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub ln_e2: f64,
    /// Kernel trace over the region; diagnostic for the start-point guard.
    #[allow(dead_code)]
    pub trace: f64,
}

/// How the weight function is represented in the node data.
///
/// * `Weighted`: node weights are plain dx weights and phi/psi carry
///   sqrt(w) (the overflow-safe choice on the unbounded Hermite support).
/// * `Absorbed`: the full weight function rides in the node weights and
///   phi/psi are the bare polynomial pair (needed when the region touches a
///   singular Jacobi endpoint where plain quadrature loses its accuracy).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum WeightHandling {
    Weighted,
    Absorbed,
}

pub(crate) fn neumann_init(
    basis: &OrthonormalBasis,
    nodes: &[(f64, f64)],
    endpoints: &[f64],
    handling: WeightHandling,
) -> Result<NeumannInit> {
    let m = nodes.len();
    let mut phi = vec![0.0; m];
    let mut psi = vec![0.0; m];
    let mut kdiag = vec![0.0; m];
    for (i, &(x, _)) in nodes.iter().enumerate() {
        let (f, g) = match handling {
            WeightHandling::Weighted => basis.phi_psi(x)?,
            WeightHandling::Absorbed => basis.phi_psi_unweighted(x),
        };
        phi[i] = f;
        psi[i] = g;
        kdiag[i] = match handling {
            WeightHandling::Weighted => basis.kernel_diag(x),
            WeightHandling::Absorbed => basis.kernel_diag_unweighted(x),
        };
    }
    // Kernel matrix with quadrature weights folded into the columns.
    let mut kw = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let k = if i == j {
                kdiag[i]
            } else {
                (phi[i] * psi[j] - phi[j] * psi[i]) / (nodes[i].0 - nodes[j].0)
            };
            kw[i * m + j] = k * nodes[j].1;
        }
    }
    let apply = |vec_in: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; m];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..m {
                acc += kw[i * m + j] * vec_in[j];
            }
            *o = acc;
        }
        out
    };
    let k_phi = apply(&phi);
    let k2_phi = apply(&k_phi);
    let k_psi = apply(&psi);
    let k2_psi = apply(&k_psi);

    // Q0 = (1-K)^{-1} phi ~ phi + K phi + K^2 phi at the endpoints (same for
    // P0); in the absorbed convention the endpoint value regains its
    // sqrt(w(a)) factor at the very end.
    let mut q = Vec::with_capacity(endpoints.len());
    let mut p = Vec::with_capacity(endpoints.len());
    for &a in endpoints {
        let ((fa, ga), scale) = match handling {
            WeightHandling::Weighted => (basis.phi_psi(a)?, 1.0),
            WeightHandling::Absorbed => (basis.phi_psi_unweighted(a), basis.weight_spec().sqrt_weight(a)),
        };
        let mut qa = fa;
        let mut pa = ga;
        for (j, &(x, w)) in nodes.iter().enumerate() {
            let k = if (x - a).abs() < 1e-13 {
                match handling {
                    WeightHandling::Weighted => basis.kernel_diag(a),
                    WeightHandling::Absorbed => basis.kernel_diag_unweighted(a),
                }
            } else {
                (fa * psi[j] - phi[j] * ga) / (a - x)
            };
            qa += w * k * (phi[j] + k_phi[j]);
            pa += w * k * (psi[j] + k_psi[j]);
        }
        q.push(scale * qa);
        p.push(scale * pa);
    }

    let dot = |f: &[f64], g: &[f64]| -> f64 { nodes.iter().zip(f.iter().zip(g)).map(|(&(_, w), (a, b))| w * a * b).sum() };
    let u = dot(&phi, &phi) + dot(&phi, &k_phi) + dot(&phi, &k2_phi);
    let v = dot(&psi, &phi) + dot(&psi, &k_phi) + dot(&psi, &k2_phi);
    let w = dot(&psi, &psi) + dot(&psi, &k_psi) + dot(&psi, &k2_psi);

    let mut trace = 0.0;
    let mut tr2 = 0.0;
    for i in 0..m {
        trace += kw[i * m + i];
        for j in 0..m {
            tr2 += kw[i * m + j] * kw[j * m + i];
        }
    }
    let mut ln_e2 = -(trace + 0.5 * tr2);
    if trace.abs() > 1e-6 {
        // Third trace moment only matters for the larger gap openings.
        let mut tr3 = 0.0;
        for i in 0..m {
            for j in 0..m {
                let mut acc = 0.0;
                for l in 0..m {
                    acc += kw[j * m + l] * kw[l * m + i];
                }
                tr3 += kw[i * m + j] * acc;
            }
        }
        ln_e2 -= tr3 / 3.0;
    }
    Ok(NeumannInit { q, p, u, v, w, ln_e2, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_exponential_decay() {
        let cfg = SolverConfig::default();
        let mut y = [1.0];
        integrate_to(&|_, y: &[f64], dy: &mut [f64]| { dy[0] = -y[0]; Ok(()) }, 0.0, 3.0, &mut y, &cfg).unwrap();
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn integrates_backwards() {
        let cfg = SolverConfig::default();
        let mut y = [1.0];
        // y' = cos t from pi down to 0; y(pi) = 1 => y(0) = 1 - sin(pi) + sin(0) = 1.
        integrate_to(&|t: f64, _: &[f64], dy: &mut [f64]| { dy[0] = t.cos(); Ok(()) }, std::f64::consts::PI, 0.0, &mut y, &cfg)
            .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-11);
    }

    #[test]
    fn stiff_blowup_reports_underflow() {
        let cfg = SolverConfig::default();
        let mut y = [1.0];
        // y' = y^2, y(0) = 1 explodes at t = 1.
        let res = integrate_to(&|_, y: &[f64], dy: &mut [f64]| { dy[0] = y[0] * y[0]; Ok(()) }, 0.0, 2.0, &mut y, &cfg);
        match res {
            Err(Error::StepUnderflow { at, .. }) => assert!((at - 1.0).abs() < 0.05, "blowup located at {at}"),
            other => panic!("expected step underflow, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let cfg = SolverConfig { rel_tol: 1e-14, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = SolverConfig { rel_tol: 1e-10, ..Default::default() };
        assert!(cfg.validate().is_ok());
    }
}
