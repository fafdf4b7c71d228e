//! Scaling-limit verifications: the large-N spectrum edge against the
//! soft-edge law, the large-parameter Jacobi-to-Hermite limit, and the
//! small-gap series against the determinant route.
//!
//! Limit statements are tested as monotone-deviation properties at finite
//! parameter values; nothing here asserts an equality "at infinity".

use crate::closedform::{gue_closed, gue_interior_closed};
use crate::error::{Error, Result};
use crate::ode::gauss::integrate_gauss;
use crate::ode::jacobi::{integrate_jacobi, JacobiFamily};
use crate::ode::series::{eval_small_s_r, small_s_coeffs_f64};
use crate::ode::SolverConfig;
use crate::orthopoly::{OrthonormalBasis, WeightSpec};
use crate::painleve::soft_edge::{airy_kernel_diag, soft_edge};

/// Residual evaluators for the third-order limit equations (the
/// parameter-free end/interior limits and the differentiated finite-N
/// second-order equations used as cross-checks).
pub use crate::ode::residual::{residual_on_grid, residual_reduced_ode, BranchSign, ReducedOde};

/// Deviations of a family of finite-parameter curves from their limit.
#[derive(Debug, Clone)]
pub struct ScalingReport {
    /// The parameter sequence (N values or alpha values).
    pub parameters: Vec<f64>,
    /// Sup-norm distance from the limit curve, one entry per parameter.
    pub deviations: Vec<f64>,
    /// Log-log slope fitted through (parameter, deviation).
    pub fitted_decay_order: f64,
}

impl ScalingReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.deviations.windows(2).all(|w| w[1] < w[0])
    }

    fn fit(parameters: Vec<f64>, deviations: Vec<f64>) -> ScalingReport {
        let n = parameters.len() as f64;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for (p, d) in parameters.iter().zip(&deviations) {
            let (x, y) = (p.ln(), d.max(1e-300).ln());
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        let slope = if parameters.len() > 1 { (n * sxy - sx * sy) / (n * sxx - sx * sx) } else { f64::NAN };
        ScalingReport { parameters, deviations, fitted_decay_order: slope }
    }
}

/// Map the edge variable t onto the gap parameter s at size N.
pub fn edge_abscissa(n: usize, t: f64) -> f64 {
    let nf = n as f64;
    (2.0 * nf).sqrt() + t / (2.0f64.sqrt() * nf.powf(1.0 / 6.0))
}

/// Sup-distance between the rescaled finite-N resolvent value and the
/// soft-edge law, for each N in `n_list`.
pub fn edge_scaling_deviation(n_list: &[usize], t_grid: &[f64]) -> Result<ScalingReport> {
    if t_grid.is_empty() || t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("edge_scaling_deviation", "t grid must be strictly increasing"));
    }
    if t_grid[0] < -2.0 || *t_grid.last().unwrap() > 4.0 {
        return Err(Error::domain("edge_scaling_deviation", "t grid must lie within [-2, 4]"));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) || n_list.iter().any(|&n| n > 100) {
        return Err(Error::domain("edge_scaling_deviation", "N list must be increasing with N <= 100"));
    }
    let limit = soft_edge(t_grid)?;
    let cfg = SolverConfig::default();
    let mut deviations = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let scale = 2.0f64.sqrt() * (n as f64).powf(1.0 / 6.0);
        let grid: Vec<f64> = t_grid.iter().map(|&t| edge_abscissa(n, t)).collect();
        let traj = integrate_gauss(n, &grid, &cfg)?;
        let dev = traj
            .iter()
            .zip(&limit)
            .map(|(sample, soft)| (sample.r / scale - soft.r_soft).abs())
            .fold(0.0f64, f64::max);
        deviations.push(dev);
    }
    Ok(ScalingReport::fit(n_list.iter().map(|&n| n as f64).collect(), deviations))
}

/// The kernel-diagonal boundary check: rescaled K_N at the edge against the
/// Airy kernel diagonal. Returns (finite-N value, limit value).
pub fn edge_kernel_check(n: usize, t: f64) -> Result<(f64, f64)> {
    let basis = OrthonormalBasis::new(WeightSpec::Hermite, n)?;
    let scale = 2.0f64.sqrt() * (n as f64).powf(1.0 / 6.0);
    let s = edge_abscissa(n, t);
    Ok((basis.kernel_diag(s) / scale, airy_kernel_diag(t)))
}

/// Hermite reference value of R at `t` for the requested region family.
fn hermite_reference(n: usize, t: f64, family: JacobiFamily, cfg: &SolverConfig) -> Result<f64> {
    match family {
        JacobiFamily::End => {
            if n <= 2 {
                Ok(gue_closed(n, t)?.r_diag.unwrap())
            } else {
                Ok(integrate_gauss(n, &[t], cfg)?[0].r)
            }
        }
        JacobiFamily::Interior => {
            if n <= 2 {
                Ok(gue_interior_closed(n, t)?.r_diag.unwrap())
            } else {
                Err(Error::unsupported("j2h_deviation", "interior Hermite reference exists for N <= 2 only"))
            }
        }
    }
}

/// Sup-distance between the rescaled Jacobi resolvent value at s = t/sqrt(a)
/// and its Hermite counterpart, for each a in `alpha_list`.
pub fn j2h_deviation(alpha_list: &[f64], t_grid: &[f64], n: usize, family: JacobiFamily) -> Result<ScalingReport> {
    if alpha_list.windows(2).any(|w| w[0] >= w[1]) || alpha_list.first().is_none_or(|&a| a < 10.0) {
        return Err(Error::domain("j2h_deviation", "alpha list must be increasing with alpha >= 10"));
    }
    if t_grid.is_empty() || t_grid.windows(2).any(|w| w[0] >= w[1]) || t_grid[0] <= 0.0 {
        return Err(Error::domain("j2h_deviation", "t grid must be positive and increasing"));
    }
    let cfg = SolverConfig::default();
    let reference: Vec<f64> = t_grid
        .iter()
        .map(|&t| hermite_reference(n, t, family, &cfg))
        .collect::<Result<_>>()?;
    let mut deviations = Vec::with_capacity(alpha_list.len());
    for &alpha in alpha_list {
        let root = alpha.sqrt();
        if *t_grid.last().unwrap() / root >= 0.9 {
            return Err(Error::domain("j2h_deviation", format!("t grid reaches s = {} at alpha = {alpha}", t_grid.last().unwrap() / root)));
        }
        let grid: Vec<f64> = t_grid.iter().map(|&t| t / root).collect();
        let weight = WeightSpec::Jacobi { alpha, beta: alpha };
        let traj = integrate_jacobi(n, &weight, family, &grid, &cfg)?;
        let dev = traj
            .iter()
            .zip(&reference)
            .map(|(sample, r_ref)| (sample.r_mean() / root - r_ref).abs())
            .fold(0.0f64, f64::max);
        deviations.push(dev);
    }
    Ok(ScalingReport::fit(alpha_list.to_vec(), deviations))
}

/// Closed-form version of the limit comparison at N <= 2:
/// (rescaled Jacobi R from the hypergeometric sigma, Hermite R).
pub fn j2h_closed_form_pair(n: usize, alpha: f64, t: f64, family: JacobiFamily) -> Result<(f64, f64)> {
    let s = t / alpha.sqrt();
    let (jacobi_r, hermite_r) = match family {
        JacobiFamily::End => (
            crate::closedform::jue_end_closed(n, alpha, alpha, s)?.r_diag.unwrap(),
            gue_closed(n, t)?.r_diag.unwrap(),
        ),
        JacobiFamily::Interior => (
            crate::closedform::jue_interior_closed(n, alpha, alpha, s)?.r_diag.unwrap(),
            gue_interior_closed(n, t)?.r_diag.unwrap(),
        ),
    };
    Ok((jacobi_r / alpha.sqrt(), hermite_r))
}

#[derive(Debug, Clone, Copy)]
pub struct SmallSCompare {
    pub series_value: f64,
    pub gram_value: f64,
    pub deviation: f64,
}

/// Truncated small-gap series of R against the determinant route
/// (R = (ln E2)' / 2 through central differences of the log-determinant).
pub fn small_s_compare(n: usize, s_eval: f64, terms: usize) -> Result<SmallSCompare> {
    if !(s_eval > 0.0 && s_eval <= 0.2) {
        return Err(Error::domain("small_s_compare", format!("s = {s_eval} outside (0, 0.2]")));
    }
    let coeffs = small_s_coeffs_f64(n, terms)?;
    let series_value = eval_small_s_r(&coeffs, s_eval);
    let basis = OrthonormalBasis::new(WeightSpec::Hermite, n)?;
    // d/ds ln E2 = 2R through a 5-point stencil on the numerically stable
    // factorized log-determinant.
    let h = 1e-4;
    let ln_at = |s: f64| crate::gap::hermite_exterior_ln_e2_small_s(&basis, s);
    let d1 = (ln_at(s_eval - 2.0 * h)? - 8.0 * ln_at(s_eval - h)? + 8.0 * ln_at(s_eval + h)?
        - ln_at(s_eval + 2.0 * h)?)
        / (12.0 * h);
    let gram_value = d1 / 2.0;
    Ok(SmallSCompare { series_value, gram_value, deviation: (series_value - gram_value).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::residual::{residual_on_grid, BranchSign, ReducedOde};

    #[test]
    fn edge_deviation_decreases_in_n() {
        let t_grid: Vec<f64> = (0..13).map(|i| -2.0 + 4.0 * i as f64 / 12.0).collect();
        let report = edge_scaling_deviation(&[10, 20, 40], &t_grid).unwrap();
        assert!(report.strictly_decreasing(), "{:?}", report.deviations);
        // The approach is roughly an inverse power of N.
        assert!(report.fitted_decay_order < -0.3, "slope {}", report.fitted_decay_order);
    }

    #[test]
    fn edge_kernel_boundary_value() {
        let (finite, limit) = edge_kernel_check(100, 1.0).unwrap();
        assert!((finite - limit).abs() < 2e-2, "{finite} vs {limit}");
    }

    #[test]
    fn edge_tail_matches_airy_combination() {
        // r(t) ~ -t Ai^2 + Ai'^2 at the far edge.
        let t_grid = [3.0, 4.0];
        let cfg = SolverConfig::default();
        let n = 100;
        let scale = 2.0f64.sqrt() * (n as f64).powf(1.0 / 6.0);
        let grid: Vec<f64> = t_grid.iter().map(|&t| edge_abscissa(n, t)).collect();
        let traj = integrate_gauss(n, &grid, &cfg).unwrap();
        for (sample, &t) in traj.iter().zip(&t_grid) {
            let (ai, aip) = crate::specfun::airy_ai_pair(t);
            let expect = -t * ai * ai + aip * aip;
            assert!((sample.r / scale - expect).abs() < 1e-3, "t = {t}");
        }
    }

    #[test]
    fn j2h_end_deviation_decreases() {
        let t_grid: Vec<f64> = (0..9).map(|i| 0.3 + 0.9 * i as f64 / 8.0).collect();
        for n in [1usize, 2] {
            let report = j2h_deviation(&[10.0, 40.0, 160.0], &t_grid, n, JacobiFamily::End).unwrap();
            assert!(report.strictly_decreasing(), "n = {n}: {:?}", report.deviations);
        }
    }

    #[test]
    fn j2h_interior_deviation_decreases() {
        let t_grid: Vec<f64> = (0..9).map(|i| 0.3 + 0.9 * i as f64 / 8.0).collect();
        for n in [1usize, 2] {
            let report = j2h_deviation(&[10.0, 40.0, 160.0], &t_grid, n, JacobiFamily::Interior).unwrap();
            assert!(report.strictly_decreasing(), "n = {n}: {:?}", report.deviations);
        }
    }

    #[test]
    fn j2h_closed_form_pointwise_limit() {
        for &t in &[0.4, 0.8, 1.2] {
            let (scaled, limit) = j2h_closed_form_pair(1, 160.0, t, JacobiFamily::End).unwrap();
            assert!((scaled - limit).abs() < 1e-3, "t = {t}: {scaled} vs {limit}");
        }
    }

    #[test]
    fn limit_equations_accept_closed_forms() {
        // The parameter-free limit equation is solved by the finite-N R
        // (N plays the role of an integration constant), and the
        // differentiated second-order equation keeps N explicitly.
        let r_of = |s: f64| gue_closed(1, s).unwrap().r_diag.unwrap();
        let rep = residual_on_grid(ReducedOde::LimitEnd, 0.6, 1.8, 361, r_of, BranchSign::Plus).unwrap();
        assert!(rep.max_normalized < 1e-6, "limit end: {}", rep.max_normalized);
        let rep = residual_on_grid(ReducedOde::GaussThirdOrder { n: 1 }, 0.6, 1.8, 361, r_of, BranchSign::Plus).unwrap();
        assert!(rep.max_normalized < 1e-6, "third order: {}", rep.max_normalized);
        let r_int = |s: f64| gue_interior_closed(1, s).unwrap().r_diag.unwrap();
        let rep = residual_on_grid(ReducedOde::LimitInterior, 0.6, 1.8, 361, r_int, BranchSign::Minus).unwrap();
        assert!(rep.max_normalized < 1e-6, "limit interior: {}", rep.max_normalized);
        // Negative control.
        let rep = residual_on_grid(
            ReducedOde::LimitEnd,
            0.6,
            1.8,
            361,
            |s| r_of(s) * (1.0 + 0.01 * (3.0 * s).sin()),
            BranchSign::Auto,
        )
        .unwrap();
        assert!(rep.max_normalized > 1e-2, "negative control: {}", rep.max_normalized);
    }

    #[test]
    fn small_s_series_vs_gram() {
        // N = 1 against the closed form, larger N against the determinant.
        let r = small_s_compare(1, 0.05, 7).unwrap();
        let exact = gue_closed(1, 0.05).unwrap().r_diag.unwrap();
        assert!((r.series_value - exact).abs() < 1e-8 * exact);
        assert!(r.deviation < 1e-5 * r.series_value.abs());
        let r = small_s_compare(3, 0.05, 7).unwrap();
        assert!(r.deviation < 1e-5 * r.series_value.abs(), "deviation {}", r.deviation);
    }

    #[test]
    fn leading_small_s_behavior() {
        // s R(s) -> N^2/2.
        for n in 1..=4usize {
            let r = small_s_compare(n, 0.01_f64.min(0.2), 3).unwrap();
            let lead = r.gram_value * 0.01;
            assert!((lead - (n * n) as f64 / 2.0).abs() < 1e-2, "n = {n}: {lead}");
        }
    }

    #[test]
    fn input_validation() {
        assert!(edge_scaling_deviation(&[10, 5], &[0.0, 1.0]).is_err());
        assert!(edge_scaling_deviation(&[10, 20], &[-3.0, 1.0]).is_err());
        assert!(j2h_deviation(&[5.0, 40.0], &[0.5], 1, JacobiFamily::End).is_err());
        assert!(small_s_compare(2, 0.5, 5).is_err());
    }
}
