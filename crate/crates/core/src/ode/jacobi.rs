//! Coupled systems for the Jacobi weight on the symmetric end region
//! (-1, -s) u (s, 1) and the interior region (-s, s).
//!
//! The general (alpha, beta) route evolves both endpoint pairs plus the
//! inner products (q-, p-, q+, p+, u, v, w); the symmetric fast path for
//! alpha = beta exploits the parity reductions (v = 0, R+ = R-) and evolves
//! (q, p, u, w) only.

use super::{integrate_to, integrate_to_scaled, neumann_init, SolverConfig, WeightHandling};
use crate::error::{Error, Result};
use crate::orthopoly::{CoefficientPolynomials, OrthonormalBasis, WeightSpec};
use crate::quadrature::QuadratureRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiFamily {
    /// Eigenvalues excluded from (-1, -s) u (s, 1); E2 grows with s.
    End,
    /// Eigenvalues excluded from (-s, s); E2 shrinks with s.
    Interior,
}

/// Full general-parameter state at one abscissa.
#[derive(Debug, Clone, Copy)]
pub struct JacobiGenState {
    pub q_minus: f64,
    pub p_minus: f64,
    pub q_plus: f64,
    pub p_plus: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct JacobiSample {
    pub s: f64,
    pub r_plus: f64,
    pub r_minus: f64,
    /// sigma = (1 - s^2)(R+ + R-)/2; equals (1 - s^2) R in the symmetric case.
    pub sigma: f64,
    pub v: f64,
    pub ln_e2: f64,
    /// As in the Hermite route: set when the end-family descent stopped on
    /// the separatrix contraction and ln_e2 is the rigorous upper bound
    /// carried over from the last reachable point; R values are NaN then.
    pub clamped: bool,
}

impl JacobiSample {
    pub fn e2(&self) -> f64 {
        self.ln_e2.exp()
    }

    pub fn r_mean(&self) -> f64 {
        0.5 * (self.r_plus + self.r_minus)
    }
}

struct Coeffs {
    alpha0: f64,
    alpha1: f64,
    beta0: f64,
    gamma0: f64,
}

impl Coeffs {
    fn new(weight: &WeightSpec, n: usize) -> Coeffs {
        let cp = CoefficientPolynomials::for_weight(weight, n);
        Coeffs { alpha0: cp.alpha0, alpha1: cp.alpha1, beta0: cp.beta0, gamma0: cp.gamma0 }
    }

    /// Coefficient of p^2 / p in the system: beta_0 + u (2 alpha_1 - 1).
    fn bu(&self, u: f64) -> f64 {
        self.beta0 + u * (2.0 * self.alpha1 - 1.0)
    }

    /// Coefficient of q^2 / q: gamma_0 - w (2 alpha_1 + 1).
    fn cw(&self, w: f64) -> f64 {
        self.gamma0 - w * (2.0 * self.alpha1 + 1.0)
    }
}

fn family_sign(family: JacobiFamily) -> f64 {
    match family {
        JacobiFamily::End => 1.0,
        JacobiFamily::Interior => -1.0,
    }
}

/// R(-s, s)-type coupling (q+ p- - q- p+) / (2s).
pub fn r_zero(s: f64, st: &JacobiGenState) -> f64 {
    (st.q_plus * st.p_minus - st.q_minus * st.p_plus) / (2.0 * s)
}

/// Diagonal resolvent values (R-, R+) for the general system. The last term
/// carries the family sign: +2s(1-s^2)R0^2 for the end region, -2s(...) for
/// the interior.
pub fn jacobi_r_pair(s: f64, st: &JacobiGenState, weight: &WeightSpec, n: usize, family: JacobiFamily) -> (f64, f64) {
    let c = Coeffs::new(weight, n);
    let sg = family_sign(family);
    let m = 1.0 - s * s;
    let r0 = r_zero(s, st);
    let shared = sg * 2.0 * s * m * r0 * r0;
    let r_minus = (c.cw(st.w) * st.q_minus * st.q_minus
        + c.bu(st.u) * st.p_minus * st.p_minus
        + (c.alpha0 - c.alpha1 * s + st.v) * 2.0 * st.q_minus * st.p_minus
        + shared)
        / m;
    let r_plus = (c.cw(st.w) * st.q_plus * st.q_plus
        + c.bu(st.u) * st.p_plus * st.p_plus
        + (c.alpha0 + c.alpha1 * s + st.v) * 2.0 * st.q_plus * st.p_plus
        + shared)
        / m;
    (r_minus, r_plus)
}

/// Derivative of the general state (either family).
pub fn jacobi_general_rhs(
    s: f64,
    st: &JacobiGenState,
    weight: &WeightSpec,
    n: usize,
    family: JacobiFamily,
) -> Result<JacobiGenState> {
    if s <= 0.0 || s >= 1.0 {
        return Err(Error::domain("jacobi_rhs", format!("singular point s = {s}")));
    }
    let c = Coeffs::new(weight, n);
    let sg = family_sign(family);
    let m = 1.0 - s * s;
    let r0 = r_zero(s, st);
    let bu = c.bu(st.u);
    let cw = c.cw(st.w);
    let am = c.alpha0 - c.alpha1 * s + st.v;
    let ap = c.alpha0 + c.alpha1 * s + st.v;
    Ok(JacobiGenState {
        q_minus: (-am * st.q_minus - bu * st.p_minus - sg * 2.0 * m * st.q_plus * r0) / m,
        p_minus: (cw * st.q_minus + am * st.p_minus - sg * 2.0 * m * st.p_plus * r0) / m,
        q_plus: (ap * st.q_plus + bu * st.p_plus - sg * 2.0 * m * st.q_minus * r0) / m,
        p_plus: (-cw * st.q_plus - ap * st.p_plus - sg * 2.0 * m * st.p_minus * r0) / m,
        u: -sg * (st.q_minus * st.q_minus + st.q_plus * st.q_plus),
        v: -sg * (st.q_minus * st.p_minus + st.q_plus * st.p_plus),
        w: -sg * (st.p_minus * st.p_minus + st.p_plus * st.p_plus),
    })
}

/// The first integral (1-s^2)(R- - R+) - 2 alpha_1 v of the end system;
/// the interior system conserves the sign-flipped combination.
pub fn jacobi_integral(s: f64, st: &JacobiGenState, weight: &WeightSpec, n: usize, family: JacobiFamily) -> f64 {
    let c = Coeffs::new(weight, n);
    let (r_minus, r_plus) = jacobi_r_pair(s, st, weight, n, family);
    let sg = family_sign(family);
    sg * (1.0 - s * s) * (r_minus - r_plus) - 2.0 * c.alpha1 * st.v
}

/// Symmetric-case state (alpha = beta): q = q+, p = p+.
#[derive(Debug, Clone, Copy)]
pub struct JacobiSymState {
    pub q: f64,
    pub p: f64,
    pub u: f64,
    pub w: f64,
}

pub fn jacobi_sym_r(s: f64, st: &JacobiSymState, weight: &WeightSpec, n: usize, family: JacobiFamily) -> f64 {
    let c = Coeffs::new(weight, n);
    let sg = family_sign(family);
    let m = 1.0 - s * s;
    let r0 = st.q * st.p / s;
    (c.cw(st.w) * st.q * st.q
        + c.bu(st.u) * st.p * st.p
        + 2.0 * c.alpha1 * s * st.q * st.p
        + sg * 2.0 * s * m * r0 * r0)
        / m
}

pub fn jacobi_sym_rhs(
    s: f64,
    st: &JacobiSymState,
    weight: &WeightSpec,
    n: usize,
    family: JacobiFamily,
) -> Result<JacobiSymState> {
    if s <= 0.0 || s >= 1.0 {
        return Err(Error::domain("jacobi_rhs", format!("singular point s = {s}")));
    }
    let c = Coeffs::new(weight, n);
    let sg = family_sign(family);
    let m = 1.0 - s * s;
    Ok(JacobiSymState {
        q: (c.alpha1 * s * st.q + c.bu(st.u) * st.p + sg * 2.0 * m * st.q * st.q * st.p / s) / m,
        p: (-c.alpha1 * s * st.p - c.cw(st.w) * st.q - sg * 2.0 * m * st.q * st.p * st.p / s) / m,
        u: -sg * 2.0 * st.q * st.q,
        w: -sg * 2.0 * st.p * st.p,
    })
}

/// Start-of-integration abscissa: near the support edge for the end family,
/// near the origin for the interior family. Shrinks geometrically until the
/// kernel trace over the region is small enough for the Neumann-series
/// initial data to be accurate to ~(tr K)^3.
fn choose_start(basis: &OrthonormalBasis, family: JacobiFamily, grid_bound: f64) -> Result<(f64, Vec<(f64, f64)>)> {
    const TRACE_TARGET: f64 = 2e-4;
    let (alpha, beta) = match *basis.weight_spec() {
        WeightSpec::Jacobi { alpha, beta } => (alpha, beta),
        WeightSpec::Hermite => return Err(Error::domain("integrate_jacobi", "Jacobi weight required")),
    };
    let order = 140;
    match family {
        JacobiFamily::End => {
            // Start as far from the edge as the grid allows; large weight
            // exponents push the kernel trace down long before eps is small.
            let mut eps = (0.5 * (1.0 - grid_bound)).min(0.05);
            loop {
                let s0 = 1.0 - eps;
                let right = QuadratureRule::jacobi(order, alpha, 0.0)?;
                let left = QuadratureRule::jacobi(order, 0.0, beta)?;
                let mut nodes: Vec<(f64, f64)> = left
                    .mapped(-1.0, -s0)
                    .into_iter()
                    .map(|(x, w)| (x, w * (1.0 - x).powf(alpha)))
                    .collect();
                nodes.extend(right.mapped(s0, 1.0).into_iter().map(|(x, w)| (x, w * (1.0 + x).powf(beta))));
                let trace: f64 = nodes.iter().map(|&(x, w)| w * basis.kernel_diag_unweighted(x)).sum();
                if trace <= TRACE_TARGET {
                    return Ok((s0, nodes));
                }
                eps /= 8.0;
                if eps < 1e-11 {
                    return Err(Error::precondition(
                        "integrate_jacobi",
                        format!("kernel trace {trace} still above {TRACE_TARGET} at eps = {eps}"),
                    ));
                }
            }
        }
        JacobiFamily::Interior => {
            let mut s0 = (0.5 * grid_bound).min(2e-4);
            loop {
                let rule = QuadratureRule::legendre(order)?;
                let nodes: Vec<(f64, f64)> = rule
                    .mapped(-s0, s0)
                    .into_iter()
                    .map(|(x, w)| (x, w * (1.0 - x).powf(alpha) * (1.0 + x).powf(beta)))
                    .collect();
                let trace: f64 = nodes.iter().map(|&(x, w)| w * basis.kernel_diag_unweighted(x)).sum();
                if trace <= TRACE_TARGET {
                    return Ok((s0, nodes));
                }
                s0 /= 8.0;
                if s0 < 1e-9 {
                    return Err(Error::precondition("integrate_jacobi", format!("kernel trace {trace} too large near 0")));
                }
            }
        }
    }
}

/// Integrate the Jacobi coupled system and report the trajectory on `grid`
/// (strictly increasing, inside (0, 1)). Dispatches to the symmetric
/// reduction when alpha = beta.
pub fn integrate_jacobi(
    n: usize,
    weight: &WeightSpec,
    family: JacobiFamily,
    grid: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<JacobiSample>> {
    cfg.validate()?;
    let (alpha, beta) = match *weight {
        WeightSpec::Jacobi { alpha, beta } => (alpha, beta),
        WeightSpec::Hermite => return Err(Error::domain("integrate_jacobi", "Jacobi weight required")),
    };
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] <= 0.0 || *grid.last().unwrap() >= 1.0 {
        return Err(Error::domain("integrate_jacobi", "grid must be strictly increasing inside (0, 1)"));
    }
    if alpha == beta {
        integrate_symmetric(n, weight, family, grid, cfg)
    } else {
        integrate_general(n, weight, family, grid, cfg)
    }
}

fn integrate_symmetric(
    n: usize,
    weight: &WeightSpec,
    family: JacobiFamily,
    grid: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<JacobiSample>> {
    let basis = OrthonormalBasis::new(*weight, n)?;
    let bound = match family {
        JacobiFamily::End => *grid.last().unwrap(),
        JacobiFamily::Interior => grid[0],
    };
    let (s0, nodes) = choose_start(&basis, family, bound)?;
    let init = neumann_init(&basis, &nodes, &[s0], WeightHandling::Absorbed)?;
    let mut y = [init.q[0], init.p[0], init.u, init.w, init.ln_e2];
    let sign = family_sign(family);
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let st = JacobiSymState { q: y[0], p: y[1], u: y[2], w: y[3] };
        let d = jacobi_sym_rhs(s, &st, weight, n, family)?;
        dy[0] = d.q;
        dy[1] = d.p;
        dy[2] = d.u;
        dy[3] = d.w;
        dy[4] = sign * 2.0 * jacobi_sym_r(s, &st, weight, n, family);
        Ok(())
    };
    let mut out = Vec::with_capacity(grid.len());
    let mut t = s0;
    let mut clamped = false;
    let visit: Box<dyn Iterator<Item = &f64>> = match family {
        JacobiFamily::End => Box::new(grid.iter().rev()),
        JacobiFamily::Interior => Box::new(grid.iter()),
    };
    for &s in visit {
        if !clamped {
            let qp = (y[0] * y[1]).abs();
            let floor_q = (1e-11 * qp / (y[1].abs() + 1e-290)).max(1e-290);
            let floor_p = (1e-11 * qp / (y[0].abs() + 1e-290)).max(1e-290);
            let floors = [floor_q, floor_p, 1e-290, 1e-290, 1e-13];
            match integrate_to_scaled(&rhs, t, s, &mut y, cfg, Some(&floors)) {
                Ok(()) => t = s,
                Err(e) => {
                    if family == JacobiFamily::End && y[4] < super::gauss::LN_CLAMP_FLOOR {
                        clamped = true;
                    } else {
                        return Err(e);
                    }
                }
            }
        }
        if clamped {
            out.push(JacobiSample { s, r_plus: f64::NAN, r_minus: f64::NAN, sigma: f64::NAN, v: 0.0, ln_e2: y[4], clamped: true });
        } else {
            let st = JacobiSymState { q: y[0], p: y[1], u: y[2], w: y[3] };
            let r = jacobi_sym_r(s, &st, weight, n, family);
            out.push(JacobiSample { s, r_plus: r, r_minus: r, sigma: (1.0 - s * s) * r, v: 0.0, ln_e2: y[4], clamped: false });
        }
    }
    if family == JacobiFamily::End {
        out.reverse();
    }
    Ok(out)
}

fn integrate_general(
    n: usize,
    weight: &WeightSpec,
    family: JacobiFamily,
    grid: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<JacobiSample>> {
    let basis = OrthonormalBasis::new(*weight, n)?;
    let bound = match family {
        JacobiFamily::End => *grid.last().unwrap(),
        JacobiFamily::Interior => grid[0],
    };
    let (s0, nodes) = choose_start(&basis, family, bound)?;
    let init = neumann_init(&basis, &nodes, &[-s0, s0], WeightHandling::Absorbed)?;
    let mut y = [init.q[0], init.p[0], init.q[1], init.p[1], init.u, init.v, init.w, init.ln_e2];
    let sign = family_sign(family);
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let st = unpack(y);
        let d = jacobi_general_rhs(s, &st, weight, n, family)?;
        dy[0] = d.q_minus;
        dy[1] = d.p_minus;
        dy[2] = d.q_plus;
        dy[3] = d.p_plus;
        dy[4] = d.u;
        dy[5] = d.v;
        dy[6] = d.w;
        let (rm, rp) = jacobi_r_pair(s, &st, weight, n, family);
        dy[7] = sign * (rm + rp);
        Ok(())
    };
    let mut out = Vec::with_capacity(grid.len());
    let mut t = s0;
    let mut clamped = false;
    let visit: Box<dyn Iterator<Item = &f64>> = match family {
        JacobiFamily::End => Box::new(grid.iter().rev()),
        JacobiFamily::Interior => Box::new(grid.iter()),
    };
    for &s in visit {
        if !clamped {
            match integrate_to(&rhs, t, s, &mut y, cfg) {
                Ok(()) => t = s,
                Err(e) => {
                    if family == JacobiFamily::End && y[7] < super::gauss::LN_CLAMP_FLOOR {
                        clamped = true;
                    } else {
                        return Err(e);
                    }
                }
            }
        }
        if clamped {
            out.push(JacobiSample { s, r_plus: f64::NAN, r_minus: f64::NAN, sigma: f64::NAN, v: y[5], ln_e2: y[7], clamped: true });
        } else {
            let st = unpack(&y);
            let (rm, rp) = jacobi_r_pair(s, &st, weight, n, family);
            out.push(JacobiSample {
                s,
                r_plus: rp,
                r_minus: rm,
                sigma: (1.0 - s * s) * 0.5 * (rm + rp),
                v: st.v,
                ln_e2: y[7],
                clamped: false,
            });
        }
    }
    if family == JacobiFamily::End {
        out.reverse();
    }
    Ok(out)
}

fn unpack(y: &[f64]) -> JacobiGenState {
    JacobiGenState { q_minus: y[0], p_minus: y[1], q_plus: y[2], p_plus: y[3], u: y[4], v: y[5], w: y[6] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{jue_end_closed, jue_interior_closed, jue_zero_alpha_closed};
    use crate::gap::gap_probability;
    use crate::geometry::GapGeometry;

    fn jac(alpha: f64, beta: f64) -> WeightSpec {
        WeightSpec::Jacobi { alpha, beta }
    }

    #[test]
    fn flat_end_family_is_power_law() {
        let cfg = SolverConfig::default();
        let grid: Vec<f64> = (1..=12).map(|i| 0.05 + i as f64 * 0.075).collect();
        let traj = integrate_jacobi(1, &jac(0.0, 0.0), JacobiFamily::End, &grid, &cfg).unwrap();
        for t in &traj {
            assert!((t.e2() - t.s).abs() < 1e-8, "s = {}: {}", t.s, t.e2());
        }
        let traj = integrate_jacobi(3, &jac(0.0, 0.0), JacobiFamily::End, &grid, &cfg).unwrap();
        for t in &traj {
            let expect = jue_zero_alpha_closed(3, t.s).unwrap();
            assert!((t.e2() - expect.e2).abs() < 1e-8, "s = {}: {} vs {}", t.s, t.e2(), expect.e2);
            assert!((t.sigma - expect.sigma.unwrap()).abs() < 1e-6 * expect.sigma.unwrap());
        }
    }

    #[test]
    fn symmetric_end_matches_closed_forms() {
        let cfg = SolverConfig::default();
        let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        for (n, alpha) in [(1usize, 1.0), (2usize, 1.5)] {
            let traj = integrate_jacobi(n, &jac(alpha, alpha), JacobiFamily::End, &grid, &cfg).unwrap();
            for t in &traj {
                let cf = jue_end_closed(n, alpha, alpha, t.s).unwrap();
                assert!((t.e2() - cf.e2).abs() < 1e-8, "n={n} s={}: {} vs {}", t.s, t.e2(), cf.e2);
                assert!(
                    (t.sigma - cf.sigma.unwrap()).abs() < 1e-6 * cf.sigma.unwrap().abs().max(0.1),
                    "sigma at s = {}",
                    t.s
                );
            }
        }
    }

    #[test]
    fn symmetric_interior_matches_closed_forms() {
        let cfg = SolverConfig::default();
        let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        for (n, alpha) in [(1usize, 0.0), (1, 1.0), (2, 1.5)] {
            let traj = integrate_jacobi(n, &jac(alpha, alpha), JacobiFamily::Interior, &grid, &cfg).unwrap();
            for t in &traj {
                let cf = jue_interior_closed(n, alpha, alpha, t.s).unwrap();
                assert!((t.e2() - cf.e2).abs() < 1e-8, "n={n} alpha={alpha} s={}: {} vs {}", t.s, t.e2(), cf.e2);
            }
        }
    }

    #[test]
    fn general_route_equals_symmetric_route_when_even() {
        let cfg = SolverConfig::default();
        let grid = [0.2, 0.5, 0.8];
        for family in [JacobiFamily::End, JacobiFamily::Interior] {
            let sym = integrate_symmetric(2, &jac(1.0, 1.0), family, &grid, &cfg).unwrap();
            let gen = integrate_general(2, &jac(1.0, 1.0), family, &grid, &cfg).unwrap();
            for (a, b) in sym.iter().zip(&gen) {
                assert!((a.e2() - b.e2()).abs() < 1e-9, "family {family:?}, s = {}", a.s);
                assert!((a.r_plus - b.r_plus).abs() < 1e-6 * a.r_plus.abs().max(1.0));
                assert!(b.v.abs() < 1e-9, "v stays zero, got {}", b.v);
            }
        }
    }

    #[test]
    fn general_end_matches_incomplete_beta_closed_form() {
        let cfg = SolverConfig::default();
        let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        let traj = integrate_jacobi(1, &jac(2.0, 1.0), JacobiFamily::End, &grid, &cfg).unwrap();
        for t in &traj {
            let cf = jue_end_closed(1, 2.0, 1.0, t.s).unwrap();
            assert!((t.e2() - cf.e2).abs() < 1e-6, "s = {}: {} vs {}", t.s, t.e2(), cf.e2);
        }
    }

    #[test]
    fn general_integral_is_conserved() {
        let cfg = SolverConfig::default();
        let weight = jac(2.0, 1.0);
        let basis = OrthonormalBasis::new(weight, 2).unwrap();
        for family in [JacobiFamily::End, JacobiFamily::Interior] {
            let (s0, nodes) = choose_start(&basis, family, 0.9).unwrap();
            let init = neumann_init(&basis, &nodes, &[-s0, s0], WeightHandling::Absorbed).unwrap();
            let mut y = [init.q[0], init.p[0], init.q[1], init.p[1], init.u, init.v, init.w, init.ln_e2];
            let sign = family_sign(family);
            let rhs = |s: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
                let st = unpack(y);
                let d = jacobi_general_rhs(s, &st, &weight, 2, family)?;
                dy.copy_from_slice(&[
                    d.q_minus,
                    d.p_minus,
                    d.q_plus,
                    d.p_plus,
                    d.u,
                    d.v,
                    d.w,
                    {
                        let (rm, rp) = jacobi_r_pair(s, &st, &weight, 2, family);
                        sign * (rm + rp)
                    },
                ]);
                Ok(())
            };
            let start_value = jacobi_integral(s0, &unpack(&y), &weight, 2, family);
            let targets = match family {
                JacobiFamily::End => [0.7, 0.4, 0.1],
                JacobiFamily::Interior => [0.3, 0.6, 0.9],
            };
            let mut t = s0;
            for s in targets {
                integrate_to(&rhs, t, s, &mut y, &cfg).unwrap();
                t = s;
                let now = jacobi_integral(s, &unpack(&y), &weight, 2, family);
                assert!((now - start_value).abs() < 1e-9, "family {family:?}, s = {s}: {now} vs {start_value}");
            }
        }
    }

    #[test]
    fn interior_matches_gram_route() {
        let cfg = SolverConfig::default();
        let grid: Vec<f64> = (1..=9).map(|i| 0.05 + i as f64 * 0.094).collect();
        let quad = QuadratureRule::legendre(160).unwrap();
        let weight = jac(1.5, 1.5);
        let basis = OrthonormalBasis::new(weight, 2).unwrap();
        let traj = integrate_jacobi(2, &weight, JacobiFamily::Interior, &grid, &cfg).unwrap();
        for t in &traj {
            let gram = gap_probability(&basis, &GapGeometry::InteriorSym { s: t.s }, &quad).unwrap();
            assert!((t.e2() - gram.value).abs() < 1e-6, "s = {}: {} vs {}", t.s, t.e2(), gram.value);
        }
    }

    #[test]
    fn square_root_identities_hold_along_trajectories() {
        // alpha1^2 s^2 -+ 2(1-s^2) sigma' = (2(1-s^2) qp / s -+ alpha1 s)^2,
        // with sigma' from finite differences of the sigma samples and qp
        // reconstructed from the evolving state.
        let cfg = SolverConfig::default();
        let weight = jac(1.0, 1.0);
        let n = 2;
        let alpha1 = -(n as f64 + 1.0);
        let grid: Vec<f64> = (0..241).map(|i| 0.3 + 0.5 * i as f64 / 240.0).collect();
        let h = grid[1] - grid[0];
        for family in [JacobiFamily::End, JacobiFamily::Interior] {
            let basis = OrthonormalBasis::new(weight, n).unwrap();
            let (s0, nodes) = choose_start(&basis, family, if family == JacobiFamily::End { 0.8 } else { 0.3 }).unwrap();
            let init = neumann_init(&basis, &nodes, &[s0], WeightHandling::Absorbed).unwrap();
            let mut y = [init.q[0], init.p[0], init.u, init.w, init.ln_e2];
            let sign = family_sign(family);
            let rhs = |s: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
                let st = JacobiSymState { q: y[0], p: y[1], u: y[2], w: y[3] };
                let d = jacobi_sym_rhs(s, &st, &weight, n, family)?;
                dy.copy_from_slice(&[d.q, d.p, d.u, d.w, sign * 2.0 * jacobi_sym_r(s, &st, &weight, n, family)]);
                Ok(())
            };
            let mut samples = Vec::with_capacity(grid.len());
            let visit: Vec<f64> = match family {
                JacobiFamily::End => grid.iter().rev().copied().collect(),
                JacobiFamily::Interior => grid.clone(),
            };
            let mut t = s0;
            for s in visit {
                integrate_to(&rhs, t, s, &mut y, &cfg).unwrap();
                t = s;
                let st = JacobiSymState { q: y[0], p: y[1], u: y[2], w: y[3] };
                samples.push((s, (1.0 - s * s) * jacobi_sym_r(s, &st, &weight, n, family), st.q * st.p));
            }
            samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let side = match family {
                JacobiFamily::End => -1.0,
                JacobiFamily::Interior => 1.0,
            };
            for i in 2..samples.len() - 2 {
                let (s, _, qp) = samples[i];
                let dsig = (samples[i - 2].1 - 8.0 * samples[i - 1].1 + 8.0 * samples[i + 1].1 - samples[i + 2].1)
                    / (12.0 * h);
                let m = 1.0 - s * s;
                let lhs = alpha1 * alpha1 * s * s + side * 2.0 * m * dsig;
                let root = 2.0 * m * qp / s + side * alpha1 * s;
                assert!((lhs - root * root).abs() < 1e-7 * lhs.abs().max(1.0), "{family:?} s = {s}: {lhs} vs {}", root * root);
            }
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let cfg = SolverConfig::default();
        assert!(integrate_jacobi(1, &jac(0.0, 0.0), JacobiFamily::End, &[0.5, 0.4], &cfg).is_err());
        assert!(integrate_jacobi(1, &jac(0.0, 0.0), JacobiFamily::End, &[0.0, 0.4], &cfg).is_err());
        assert!(integrate_jacobi(1, &jac(0.0, 0.0), JacobiFamily::End, &[0.5, 1.0], &cfg).is_err());
        assert!(integrate_jacobi(1, &WeightSpec::Hermite, JacobiFamily::End, &[0.5], &cfg).is_err());
    }
}
