//! Explicit N = 1, 2 evaluations of the gap probability and its associated
//! resolvent quantities, plus the flat-weight (alpha = beta = 0) end-interval
//! family at every N.
//!
//! These are the strongest oracles in the crate: every other route
//! (Gram determinants, coupled ODE systems, Painleve parametrizations) is
//! validated against them.

use crate::error::{Error, Result};
use crate::specfun::{erf, erfc, gauss_2f1, log_beta, SQRT_PI};

/// Bundle of closed-form values at one gap parameter. Fields without a
/// known formula stay `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormBundle {
    pub e2: f64,
    /// Diagonal resolvent boundary value R(s) = R(s, s).
    pub r_diag: Option<f64>,
    /// Off-diagonal companion (the Hermite R-tilde).
    pub r_off: Option<f64>,
    /// sigma(s) = (1 - s^2) R(s) for the Jacobi families.
    pub sigma: Option<f64>,
    /// The square-root auxiliary variable (h, H or G as appropriate).
    pub h_or_g: Option<f64>,
}

fn check_n12(n: usize, context: &'static str) -> Result<()> {
    if n == 1 || n == 2 {
        Ok(())
    } else {
        Err(Error::unsupported(context, format!("closed forms exist for N = 1, 2 only (got {n})")))
    }
}

/// Hermite weight, eigenvalue-free region (-inf, -s) u (s, inf).
pub fn gue_closed(n: usize, s: f64) -> Result<ClosedFormBundle> {
    check_n12(n, "gue_closed")?;
    if !(s > 0.0) {
        return Err(Error::domain("gue_closed", format!("s = {s} must be positive")));
    }
    let es2 = (-s * s).exp();
    let e = erf(s);
    let bundle = if n == 1 {
        let r = es2 / (SQRT_PI * e);
        ClosedFormBundle {
            e2: e,
            r_diag: Some(r),
            r_off: Some(-r),
            sigma: None,
            h_or_g: Some(s + 2.0 * r),
        }
    } else {
        let first = es2 / (SQRT_PI * e);
        let second = s * s * es2 / (0.5 * SQRT_PI * e - s * es2);
        let r_off = first - second;
        ClosedFormBundle {
            e2: e * (e - 2.0 * s * es2 / SQRT_PI),
            r_diag: Some(first + second),
            r_off: Some(r_off),
            sigma: None,
            h_or_g: Some(s - 2.0 * r_off),
        }
    };
    Ok(bundle)
}

/// Hermite weight, complementary geometry: (-s, s) eigenvalue free.
/// Follows from the same rank-N truncation with the interval swapped.
pub fn gue_interior_closed(n: usize, s: f64) -> Result<ClosedFormBundle> {
    check_n12(n, "gue_interior_closed")?;
    if !(s > 0.0) {
        return Err(Error::domain("gue_interior_closed", format!("s = {s} must be positive")));
    }
    let es2 = (-s * s).exp();
    let f1 = erfc(s);
    Ok(if n == 1 {
        ClosedFormBundle {
            e2: f1,
            r_diag: Some(es2 / (SQRT_PI * f1)),
            r_off: None,
            sigma: None,
            h_or_g: None,
        }
    } else {
        let f2 = f1 + 2.0 * s * es2 / SQRT_PI;
        let r = es2 / (SQRT_PI * f1) + 2.0 * s * s * es2 / (SQRT_PI * f2);
        ClosedFormBundle { e2: f1 * f2, r_diag: Some(r), r_off: None, sigma: None, h_or_g: None }
    })
}

fn inc_beta_bracket(s: f64, a: f64, b: f64) -> Result<f64> {
    let plus = crate::specfun::reg_inc_beta(0.5 * (1.0 + s), a, b)?;
    let minus = crate::specfun::reg_inc_beta(0.5 * (1.0 - s), a, b)?;
    Ok(plus - minus)
}

fn check_jacobi_args(alpha: f64, beta: f64, s: f64, context: &'static str) -> Result<()> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::domain(context, format!("parameters ({alpha}, {beta}) must exceed -1")));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(context, format!("s = {s} must lie in (0, 1)")));
    }
    Ok(())
}

/// Jacobi weight, end-interval geometry (-1, -s) u (s, 1).
///
/// The probability uses the incomplete-beta forms valid for every
/// (alpha, beta); sigma and the auxiliary H are filled in for alpha = beta
/// from the hypergeometric forms.
pub fn jue_end_closed(n: usize, alpha: f64, beta: f64, s: f64) -> Result<ClosedFormBundle> {
    check_n12(n, "jue_end_closed")?;
    check_jacobi_args(alpha, beta, s, "jue_end_closed")?;
    let e2 = if n == 1 {
        inc_beta_bracket(s, alpha + 1.0, beta + 1.0)?
    } else {
        (alpha + beta + 3.0)
            * inc_beta_bracket(s, alpha + 1.0, beta + 2.0)?
            * inc_beta_bracket(s, alpha + 2.0, beta + 1.0)?
            - (alpha + beta + 2.0)
                * inc_beta_bracket(s, alpha + 2.0, beta + 2.0)?
                * inc_beta_bracket(s, alpha + 1.0, beta + 1.0)?
    };
    if alpha != beta {
        return Ok(ClosedFormBundle { e2, r_diag: None, r_off: None, sigma: None, h_or_g: None });
    }
    let s2 = s * s;
    let pow = (1.0 - s2).powf(alpha + 1.0);
    let f1 = gauss_2f1(-alpha, 0.5, 1.5, s2)?;
    let (sigma, h) = if n == 1 {
        let sigma = 0.5 * pow / (s * f1);
        (sigma, (alpha + 1.0) * s + pow / (s * f1))
    } else {
        let f2 = gauss_2f1(-alpha, 1.5, 2.5, s2)?;
        let sigma = 0.5 * pow / s * (1.0 / f1 + 3.0 / f2);
        let h = (alpha + 2.0) * s + pow / s * (-1.0 / f1 + 3.0 / f2);
        (sigma, h)
    };
    Ok(ClosedFormBundle {
        e2,
        r_diag: Some(sigma / (1.0 - s2)),
        r_off: None,
        sigma: Some(sigma),
        h_or_g: Some(h),
    })
}

/// The hypergeometric form of the end-interval probability for alpha = beta
/// (used as a cross-check against the incomplete-beta route).
pub fn jue_end_e2_hypergeometric(n: usize, alpha: f64, s: f64) -> Result<f64> {
    check_n12(n, "jue_end_e2_hypergeometric")?;
    let s2 = s * s;
    if n == 1 {
        let lb = log_beta(alpha + 1.0, alpha + 1.0)?;
        Ok(s * gauss_2f1(-alpha, 0.5, 1.5, s2)? / ((2.0 * alpha) * std::f64::consts::LN_2 + lb).exp())
    } else {
        let lb = log_beta(alpha + 1.0, alpha + 2.0)?;
        let front = (2.0 * alpha + 3.0) / ((4.0 * alpha + 2.0) * std::f64::consts::LN_2 + 2.0 * lb).exp();
        Ok(front * s2 * s2 / 3.0 * gauss_2f1(-alpha, 0.5, 1.5, s2)? * gauss_2f1(-alpha, 1.5, 2.5, s2)?)
    }
}

/// Jacobi weight, interior geometry (-s, s).
pub fn jue_interior_closed(n: usize, alpha: f64, beta: f64, s: f64) -> Result<ClosedFormBundle> {
    check_n12(n, "jue_interior_closed")?;
    check_jacobi_args(alpha, beta, s, "jue_interior_closed")?;
    let e2 = if n == 1 {
        1.0 - inc_beta_bracket(s, alpha + 1.0, beta + 1.0)?
    } else {
        (alpha + beta + 3.0)
            * (1.0 - inc_beta_bracket(s, alpha + 1.0, beta + 2.0)?)
            * (1.0 - inc_beta_bracket(s, alpha + 2.0, beta + 1.0)?)
            - (alpha + beta + 2.0)
                * (1.0 - inc_beta_bracket(s, alpha + 2.0, beta + 2.0)?)
                * (1.0 - inc_beta_bracket(s, alpha + 1.0, beta + 1.0)?)
    };
    if alpha != beta {
        return Ok(ClosedFormBundle { e2, r_diag: None, r_off: None, sigma: None, h_or_g: None });
    }
    let s2 = s * s;
    let z = 1.0 - s2;
    let f1 = gauss_2f1(alpha + 1.5, 1.0, alpha + 2.0, z)?;
    let (sigma, g) = if n == 1 {
        let sigma = (alpha + 1.0) / (s * f1);
        (sigma, (alpha + 1.0) * (s - 2.0 / (s * f1)))
    } else {
        let f2 = gauss_2f1(alpha + 2.5, 1.0, alpha + 2.0, z)?;
        let sigma = (alpha + 1.0) * (1.0 / (s * f1) + 1.0 / (s * f2));
        let g = (alpha + 2.0) * s + 2.0 * (alpha + 1.0) * (1.0 / (s * f1) - 1.0 / (s * f2));
        (sigma, g)
    };
    Ok(ClosedFormBundle {
        e2,
        r_diag: Some(sigma / (1.0 - s2)),
        r_off: None,
        sigma: Some(sigma),
        h_or_g: Some(g),
    })
}

/// Hypergeometric form of the interior probability for alpha = beta.
pub fn jue_interior_e2_hypergeometric(n: usize, alpha: f64, s: f64) -> Result<f64> {
    check_n12(n, "jue_interior_e2_hypergeometric")?;
    let s2 = s * s;
    let z = 1.0 - s2;
    if n == 1 {
        let lb = log_beta(alpha + 1.0, alpha + 1.0)?;
        let denom = ((2.0 * alpha + 1.0) * std::f64::consts::LN_2 + lb).exp() * (alpha + 1.0);
        Ok(s * z.powf(alpha + 1.0) / denom * gauss_2f1(alpha + 1.5, 1.0, alpha + 2.0, z)?)
    } else {
        let lb = log_beta(alpha + 2.0, alpha + 2.0)?;
        let denom = ((4.0 * alpha + 4.0) * std::f64::consts::LN_2 + 2.0 * lb).exp() * (2.0 * alpha + 3.0);
        Ok(z.powf(2.0 * alpha + 2.0) * s2 * s2 / denom
            * gauss_2f1(alpha + 1.5, 1.0, alpha + 2.0, z)?
            * gauss_2f1(alpha + 2.5, 1.0, alpha + 2.0, z)?)
    }
}

/// Flat Jacobi weight (alpha = beta = 0), end-interval geometry, any N:
/// E2 = s^{N^2}, sigma = N^2 (1 - s^2) / (2s), H = N / s.
pub fn jue_zero_alpha_closed(n: usize, s: f64) -> Result<ClosedFormBundle> {
    if n == 0 {
        return Err(Error::domain("jue_zero_alpha_closed", "N must be positive"));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain("jue_zero_alpha_closed", format!("s = {s} must lie in (0, 1)")));
    }
    let n2 = (n * n) as f64;
    let sigma = n2 * (1.0 - s * s) / (2.0 * s);
    Ok(ClosedFormBundle {
        e2: s.powi((n * n) as i32),
        r_diag: Some(n2 / (2.0 * s)),
        r_off: None,
        sigma: Some(sigma),
        h_or_g: Some(n as f64 / s),
    })
}
