//! Residual evaluators for the reduced second- and third-order scalar ODEs.
//!
//! Derivatives come from 7-point central stencils on a uniform grid (three
//! points discarded per edge), so third derivatives carry O(h^4) accuracy.
//! Each residual is normalized by the largest additive term of the equation
//! at that point, making "small" scale-free.

use crate::error::{Error, Result};

/// Which reduced equation to evaluate against the samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReducedOde {
    /// Second-order equation for R(s), Hermite exterior region.
    GaussR { n: usize },
    /// Squared second-order equation for R-tilde(s), Hermite exterior.
    GaussRTilde { n: usize },
    /// Second-order equation for R(s), Hermite interior region.
    GaussInteriorR { n: usize },
    /// Third-order equation for sigma(s), Jacobi end region.
    JacobiEndSigma { alpha1: f64 },
    /// Third-order equation for sigma(s), Jacobi interior region.
    JacobiInteriorSigma { alpha1: f64 },
    /// Third-order equation obtained by differentiating the Hermite
    /// exterior equation (keeps N).
    GaussThirdOrder { n: usize },
    /// Interior counterpart of the differentiated equation.
    GaussInteriorThirdOrder { n: usize },
    /// Parameter-free third-order limit equation, end family.
    LimitEnd,
    /// Parameter-free third-order limit equation, interior family.
    LimitInterior,
}

/// Square-root branch for the auxiliary variable (H or G). `Auto` evaluates
/// both constant signs and reports the smaller residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchSign {
    Plus,
    Minus,
    Auto,
}

#[derive(Debug, Clone, Copy)]
pub struct ResidualReport {
    /// max over interior points of |residual| / max |additive term|.
    pub max_normalized: f64,
    /// number of interior points evaluated.
    pub points: usize,
    /// the branch sign that produced the report.
    pub branch: f64,
}

/// Derivatives (f', f'', f''') at interior index i of a uniform grid.
fn stencil(f: &[f64], i: usize, h: f64) -> (f64, f64, f64) {
    let d1 = (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] - 9.0 * f[i + 2] + f[i + 3]) / (60.0 * h);
    let d2 = (2.0 * f[i - 3] - 27.0 * f[i - 2] + 270.0 * f[i - 1] - 490.0 * f[i] + 270.0 * f[i + 1]
        - 27.0 * f[i + 2]
        + 2.0 * f[i + 3])
        / (180.0 * h * h);
    let d3 = (f[i - 3] - 8.0 * f[i - 2] + 13.0 * f[i - 1] - 13.0 * f[i + 1] + 8.0 * f[i + 2] - f[i + 3])
        / (8.0 * h * h * h);
    (d1, d2, d3)
}

fn check_uniform(s: &[f64]) -> Result<f64> {
    if s.len() < 7 {
        return Err(Error::domain("residual_reduced_ode", "need at least 7 uniformly spaced samples"));
    }
    let h = s[1] - s[0];
    for w in s.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs() {
            return Err(Error::domain("residual_reduced_ode", "samples must be uniformly spaced"));
        }
    }
    Ok(h)
}

fn norm_residual(terms: &[f64]) -> f64 {
    let sum: f64 = terms.iter().sum();
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs())).max(1e-300);
    (sum / scale).abs()
}

/// Guarded square root: tolerates a relative-noise sliver of negativity.
fn sqrt_guarded(radicand: f64, scale: f64, at: f64) -> Result<f64> {
    if radicand < -1e-9 * scale.max(1e-30) {
        return Err(Error::BranchViolation { at, radicand });
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Evaluate the normalized residual of `kind` along uniformly spaced samples
/// of the relevant scalar (R, R-tilde, or sigma).
pub fn residual_reduced_ode(kind: ReducedOde, s: &[f64], f: &[f64], branch: BranchSign) -> Result<ResidualReport> {
    if s.len() != f.len() {
        return Err(Error::domain("residual_reduced_ode", "abscissae and samples differ in length"));
    }
    let h = check_uniform(s)?;
    let signs: &[f64] = match branch {
        BranchSign::Plus => &[1.0],
        BranchSign::Minus => &[-1.0],
        BranchSign::Auto => &[1.0, -1.0],
    };
    let mut best: Option<ResidualReport> = None;
    for &sign in signs {
        let mut worst = 0.0f64;
        let mut points = 0usize;
        let mut failed = None;
        for i in 3..s.len() - 3 {
            match point_residual(kind, s[i], f[i], stencil(f, i, h), sign) {
                Ok(r) => {
                    worst = worst.max(r);
                    points += 1;
                }
                Err(e) => {
                    failed = Some(e);
                    break;
                }
            }
        }
        if let Some(e) = failed {
            if matches!(branch, BranchSign::Auto) {
                continue;
            }
            return Err(e);
        }
        let report = ResidualReport { max_normalized: worst, points, branch: sign };
        best = match best {
            None => Some(report),
            Some(prev) if report.max_normalized < prev.max_normalized => Some(report),
            keep => keep,
        };
    }
    best.ok_or_else(|| Error::BranchViolation { at: s[3], radicand: f64::NAN })
}

fn point_residual(kind: ReducedOde, s: f64, f0: f64, derivs: (f64, f64, f64), sign: f64) -> Result<f64> {
    let (d1, d2, d3) = derivs;
    match kind {
        ReducedOde::GaussR { n } => {
            // The radical changes its branch along gap trajectories, so the
            // equation is tested in the squared form
            // (s R'' + 2R' - 2s(s-h))^2 = 4 h^2 [(R+sR')^2 - 4s^2(s-h)R - 2N s^2 (s-h)^2].
            let hvar = sign * sqrt_guarded(s * s - 2.0 * d1, s * s, s)?;
            let a_prime = f0 + s * d1;
            let gap = s - hvar;
            let rad = a_prime * a_prime - 4.0 * s * s * gap * f0 - 2.0 * (n as f64) * s * s * gap * gap;
            if rad < -1e-9 * (a_prime * a_prime + (s * s * gap).abs()).max(1e-30) {
                return Err(Error::BranchViolation { at: s, radicand: rad });
            }
            let lhs = s * d2 + 2.0 * d1 - 2.0 * s * gap;
            let terms = [lhs * lhs, -4.0 * hvar * hvar * rad];
            Ok(norm_residual(&terms))
        }
        ReducedOde::GaussRTilde { n } => {
            let nf = n as f64;
            let lhs = s * d2 + 2.0 * d1 + 8.0 * nf * s * f0 + 24.0 * s * s * f0 * f0;
            let e = f0 + s * d1;
            let rhs = 4.0
                * (s + 2.0 * f0)
                * (s + 2.0 * f0)
                * (e * e + 8.0 * nf * s * s * f0 * f0 + 16.0 * s * s * s * f0 * f0 * f0);
            let terms = [lhs * lhs, -rhs];
            Ok(norm_residual(&terms))
        }
        ReducedOde::GaussInteriorR { n } => {
            // g = sqrt(s^2 + 2R') changes sign along interior trajectories
            // whenever the boundary polynomial pair has a zero, so the
            // equation is reduced to a polynomial identity in g^2: writing
            // the squared equation as E + g O = 0 with E, O polynomial in
            // g^2, the branch-free residual is E^2 - g^2 O^2.
            let nf = n as f64;
            let g2 = s * s + 2.0 * d1;
            if g2 < -1e-9 * s * s {
                return Err(Error::BranchViolation { at: s, radicand: g2 });
            }
            let g2 = g2.max(0.0);
            let a = s * f0;
            let a_prime = f0 + s * d1;
            let big_a = s * d2 + 2.0 * d1 + 2.0 * s * s;
            let big_b = -2.0 * s;
            let c = a_prime * a_prime + 4.0 * s * s * a - 2.0 * nf * s.powi(4) - 2.0 * nf * s * s * g2;
            let d = -4.0 * s * a + 4.0 * nf * s * s * s;
            let even = big_a * big_a + big_b * big_b * g2 - 4.0 * g2 * c;
            let odd = 2.0 * big_a * big_b - 4.0 * g2 * d;
            let terms = [even * even, -g2 * odd * odd];
            Ok(norm_residual(&terms))
        }
        ReducedOde::JacobiEndSigma { alpha1 } => {
            let m = 1.0 - s * s;
            let hvar = sign * sqrt_guarded(alpha1 * alpha1 * s * s - 2.0 * m * d1, alpha1 * alpha1 * s * s, s)?;
            let sq = m * d2 - 2.0 * d1 / s;
            let terms = [
                m * m * d3,
                -2.0 * s * m * d2,
                -2.0 * m * d1 / (s * s),
                -m * m * d2 * d2 / d1,
                alpha1 * s / (2.0 * d1) * (alpha1 * s + hvar) / (hvar * hvar) * sq * sq,
                4.0 * alpha1 * hvar * f0,
                2.0 * (alpha1 * s + hvar) * (alpha1 / s - hvar * d1),
                2.0 * f0 * f0 / (s * s * d1) * hvar * (hvar - alpha1 * s),
            ];
            Ok(norm_residual(&terms))
        }
        ReducedOde::JacobiInteriorSigma { alpha1 } => {
            let m = 1.0 - s * s;
            let g = sign * sqrt_guarded(alpha1 * alpha1 * s * s + 2.0 * m * d1, alpha1 * alpha1 * s * s, s)?;
            let sq = m * d2 - 2.0 * d1 / s;
            let terms = [
                m * m * d3,
                -2.0 * s * m * d2,
                -2.0 * m * d1 / (s * s),
                -m * m * d2 * d2 / d1,
                alpha1 * s / (2.0 * d1) * (alpha1 * s + g) / (g * g) * sq * sq,
                4.0 * alpha1 * g * f0,
                -2.0 * (alpha1 * s + g) * (alpha1 / s + g * d1),
                2.0 * f0 * f0 / (s * s * d1) * g * (g - alpha1 * s),
            ];
            Ok(norm_residual(&terms))
        }
        ReducedOde::GaussThirdOrder { n } => {
            let nf = n as f64;
            let hvar = sign * sqrt_guarded(s * s - 2.0 * d1, s * s, s)?;
            let h2 = hvar * hvar;
            let terms = [
                s * d3,
                3.0 * d2,
                -4.0 * s,
                -4.0 * h2 * (s * d1 + f0 + 2.0 * nf * s),
                2.0 * hvar,
                8.0 * s * (f0 + nf * s) * hvar,
                (s - d2) * (2.0 * s * s - s * d2 - 2.0 * d1) / h2,
            ];
            Ok(norm_residual(&terms))
        }
        ReducedOde::GaussInteriorThirdOrder { n } => {
            let nf = n as f64;
            let g = sign * sqrt_guarded(s * s + 2.0 * d1, s * s, s)?;
            let g2 = g * g;
            let terms = [
                s * d3,
                3.0 * d2,
                4.0 * s,
                -4.0 * g2 * (s * d1 + f0 - 2.0 * nf * s),
                -2.0 * g,
                8.0 * s * (f0 - nf * s) * g,
                -(s + d2) * (2.0 * s * s + s * d2 + 2.0 * d1) / g2,
            ];
            Ok(norm_residual(&terms))
        }
        ReducedOde::LimitEnd => {
            let hvar = sign * sqrt_guarded(s * s - 2.0 * d1, s * s, s)?;
            let num = s * d2 - 2.0 * d1;
            let terms = [
                d3,
                2.0,
                -d2 * d2 / d1,
                -2.0 * d1 / (s * s),
                2.0 / (s * s) * f0 * f0 / d1 * hvar * (s + hvar),
                2.0 * d1 * hvar * (s - hvar),
                -(4.0 * f0 + 2.0 / s) * hvar,
                num * num / (2.0 * s * d1 * hvar * hvar) * (s - hvar),
            ];
            Ok(norm_residual(&terms))
        }
        ReducedOde::LimitInterior => {
            let g = sign * sqrt_guarded(s * s + 2.0 * d1, s * s, s)?;
            let num = s * d2 - 2.0 * d1;
            let terms = [
                d3,
                -2.0,
                -d2 * d2 / d1,
                -2.0 * d1 / (s * s),
                2.0 / (s * s) * f0 * f0 / d1 * g * (s + g),
                2.0 * d1 * g * (s - g),
                -(4.0 * f0 - 2.0 / s) * g,
                num * num / (2.0 * s * d1 * g * g) * (s - g),
            ];
            Ok(norm_residual(&terms))
        }
    }
}

/// Convenience: run a closed-form function over a uniform grid and evaluate.
pub fn residual_on_grid<F: Fn(f64) -> f64>(
    kind: ReducedOde,
    lo: f64,
    hi: f64,
    count: usize,
    f: F,
    branch: BranchSign,
) -> Result<ResidualReport> {
    let s: Vec<f64> = (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect();
    let vals: Vec<f64> = s.iter().map(|&x| f(x)).collect();
    residual_reduced_ode(kind, &s, &vals, branch)
}
