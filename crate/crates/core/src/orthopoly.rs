//! Orthonormal Hermite and Jacobi polynomials, the weighted pair
//! (phi, psi), the Christoffel-Darboux kernel, and the coefficient
//! polynomials of the first-order differential system.
//!
//! Everything is evaluated by forward three-term recurrence in the
//! orthonormal normalization. The weighted variants iterate directly on
//! sqrt(w) p_k, which keeps intermediates bounded even far outside the
//! bulk of the Hermite weight where p_k alone would overflow.

use crate::error::{Error, Result};
use crate::specfun::log_beta;

pub const MAX_ENSEMBLE_SIZE: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    /// w(x) = exp(-x^2) on the whole line.
    Hermite,
    /// w(x) = (1-x)^alpha (1+x)^beta on (-1, 1), alpha, beta > -1.
    Jacobi { alpha: f64, beta: f64 },
}

impl WeightSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightSpec::Hermite => Ok(()),
            WeightSpec::Jacobi { alpha, beta } => {
                if alpha > -1.0 && beta > -1.0 && alpha.is_finite() && beta.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain("WeightSpec", format!("Jacobi parameters ({alpha}, {beta}) must be finite and > -1")))
                }
            }
        }
    }

    /// Even weights admit the parity reductions and the factorization identity.
    pub fn is_even(&self) -> bool {
        match *self {
            WeightSpec::Hermite => true,
            WeightSpec::Jacobi { alpha, beta } => alpha == beta,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            WeightSpec::Hermite => (f64::NEG_INFINITY, f64::INFINITY),
            WeightSpec::Jacobi { .. } => (-1.0, 1.0),
        }
    }

    pub fn in_support(&self, x: f64) -> bool {
        let (lo, hi) = self.support();
        x >= lo && x <= hi
    }

    pub fn sqrt_weight(&self, x: f64) -> f64 {
        match *self {
            WeightSpec::Hermite => (-0.5 * x * x).exp(),
            WeightSpec::Jacobi { alpha, beta } => {
                let a = (1.0 - x).max(0.0);
                let b = (1.0 + x).max(0.0);
                a.powf(0.5 * alpha) * b.powf(0.5 * beta)
            }
        }
    }

    pub fn weight(&self, x: f64) -> f64 {
        let s = self.sqrt_weight(x);
        s * s
    }
}

/// Coefficients of the polynomials m(x) = mu0 + mu1 x + mu2 x^2,
/// A(x) = alpha0 + alpha1 x, B(x) = beta0 + beta1 x, C(x) = gamma0 + gamma1 x
/// in the first-order system m phi' = A phi + B psi, m psi' = -C phi - A psi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientPolynomials {
    pub mu0: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub gamma0: f64,
    pub gamma1: f64,
}

impl CoefficientPolynomials {
    pub fn for_weight(weight: &WeightSpec, n: usize) -> Self {
        let nf = n as f64;
        match *weight {
            WeightSpec::Hermite => CoefficientPolynomials {
                mu0: 1.0,
                mu1: 0.0,
                mu2: 0.0,
                alpha0: 0.0,
                alpha1: -1.0,
                beta0: (2.0 * nf).sqrt(),
                beta1: 0.0,
                gamma0: (2.0 * nf).sqrt(),
                gamma1: 0.0,
            },
            WeightSpec::Jacobi { alpha, beta } => {
                let d = 2.0 * nf + alpha + beta;
                let root = 2.0 * (nf * (nf + alpha) * (nf + beta) * (nf + alpha + beta)).sqrt() / d;
                CoefficientPolynomials {
                    mu0: 1.0,
                    mu1: 0.0,
                    mu2: -1.0,
                    alpha0: (beta * beta - alpha * alpha) / (2.0 * d),
                    alpha1: -d / 2.0,
                    beta0: root * ((d + 1.0) / (d - 1.0)).sqrt(),
                    beta1: 0.0,
                    gamma0: root * ((d - 1.0) / (d + 1.0)).sqrt(),
                    gamma1: 0.0,
                }
            }
        }
    }

    pub fn m(&self, x: f64) -> f64 {
        self.mu0 + self.mu1 * x + self.mu2 * x * x
    }

    pub fn a(&self, x: f64) -> f64 {
        self.alpha0 + self.alpha1 * x
    }

    pub fn b(&self, x: f64) -> f64 {
        self.beta0 + self.beta1 * x
    }

    pub fn c(&self, x: f64) -> f64 {
        self.gamma0 + self.gamma1 * x
    }
}

/// Orthonormal basis truncated at ensemble size N: the kernel uses
/// p_0, ..., p_{N-1} plus the boundary pair (p_{N-1}, p_N).
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    weight: WeightSpec,
    n: usize,
    /// a_{N-1}/a_N, the ratio of leading coefficients.
    lead_ratio: f64,
    p0: f64,
}

impl OrthonormalBasis {
    pub fn new(weight: WeightSpec, n: usize) -> Result<Self> {
        weight.validate()?;
        if n == 0 || n > MAX_ENSEMBLE_SIZE {
            return Err(Error::domain("OrthonormalBasis", format!("ensemble size {n} outside 1..={MAX_ENSEMBLE_SIZE}")));
        }
        let p0 = match weight {
            WeightSpec::Hermite => std::f64::consts::PI.powf(-0.25),
            WeightSpec::Jacobi { alpha, beta } => {
                (-0.5 * ((alpha + beta + 1.0) * std::f64::consts::LN_2 + log_beta(alpha + 1.0, beta + 1.0)?)).exp()
            }
        };
        let mut basis = OrthonormalBasis { weight, n, lead_ratio: 0.0, p0 };
        basis.lead_ratio = basis.offdiag(n);
        Ok(basis)
    }

    pub fn weight_spec(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn ensemble_size(&self) -> usize {
        self.n
    }

    /// a_{N-1}/a_N.
    pub fn leading_coeff_ratio(&self) -> f64 {
        self.lead_ratio
    }

    pub fn coefficient_polynomials(&self) -> CoefficientPolynomials {
        CoefficientPolynomials::for_weight(&self.weight, self.n)
    }

    /// Recurrence diagonal a_k in x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}.
    fn diag(&self, k: usize) -> f64 {
        match self.weight {
            WeightSpec::Hermite => 0.0,
            WeightSpec::Jacobi { alpha, beta } => {
                if alpha == beta {
                    0.0
                } else if k == 0 {
                    (beta - alpha) / (alpha + beta + 2.0)
                } else {
                    let d = 2.0 * k as f64 + alpha + beta;
                    (beta * beta - alpha * alpha) / (d * (d + 2.0))
                }
            }
        }
    }

    /// Recurrence off-diagonal b_k (couples degrees k-1 and k), k >= 1.
    /// b_0 is returned as 0 so it can ride along the recurrence harmlessly.
    fn offdiag(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let kf = k as f64;
        match self.weight {
            WeightSpec::Hermite => (0.5 * kf).sqrt(),
            WeightSpec::Jacobi { alpha, beta } => {
                // k = 1 uses the form with (1 + alpha + beta) cancelled, which
                // is otherwise 0/0 at alpha + beta = -1.
                let b2 = if k == 1 {
                    let d = 2.0 + alpha + beta;
                    4.0 * (1.0 + alpha) * (1.0 + beta) / (d * d * (3.0 + alpha + beta))
                } else {
                    let d = 2.0 * kf + alpha + beta;
                    4.0 * kf * (kf + alpha) * (kf + beta) * (kf + alpha + beta)
                        / (d * d * (d + 1.0) * (d - 1.0))
                };
                b2.sqrt()
            }
        }
    }

    fn check_support(&self, x: f64, context: &'static str) -> Result<()> {
        if self.weight.in_support(x) {
            Ok(())
        } else {
            Err(Error::domain(context, format!("x = {x} outside the weight support")))
        }
    }

    /// Raw orthonormal polynomial values p_0(x), ..., p_m(x).
    pub fn poly_values(&self, x: f64, m: usize) -> Vec<f64> {
        let mut vals = Vec::with_capacity(m + 1);
        let mut prev = 0.0;
        let mut cur = self.p0;
        vals.push(cur);
        for k in 0..m {
            let next = ((x - self.diag(k)) * cur - self.offdiag(k) * prev) / self.offdiag(k + 1);
            prev = cur;
            cur = next;
            vals.push(cur);
        }
        vals
    }

    /// Weighted values sqrt(w(x)) p_k(x) for k = 0..=m, by the same
    /// recurrence seeded at sqrt(w) p_0 (overflow-safe for Hermite).
    pub fn weighted_values(&self, x: f64, m: usize) -> Vec<f64> {
        let mut vals = Vec::with_capacity(m + 1);
        let mut prev = 0.0;
        let mut cur = self.weight.sqrt_weight(x) * self.p0;
        vals.push(cur);
        for k in 0..m {
            let next = ((x - self.diag(k)) * cur - self.offdiag(k) * prev) / self.offdiag(k + 1);
            prev = cur;
            cur = next;
            vals.push(cur);
        }
        vals
    }

    pub fn eval_orthonormal(&self, degree: usize, x: f64) -> Result<f64> {
        if degree > self.n {
            return Err(Error::domain("eval_orthonormal", format!("degree {degree} exceeds cap {}", self.n)));
        }
        if let WeightSpec::Jacobi { .. } = self.weight {
            self.check_support(x, "eval_orthonormal")?;
        }
        Ok(self.poly_values(x, degree)[degree])
    }

    /// phi = (a_{N-1}/a_N w)^{1/2} p_N, psi = (a_{N-1}/a_N w)^{1/2} p_{N-1}.
    pub fn phi_psi(&self, x: f64) -> Result<(f64, f64)> {
        self.check_support(x, "phi_psi")?;
        let vals = self.weighted_values(x, self.n);
        let root = self.lead_ratio.sqrt();
        Ok((root * vals[self.n], root * vals[self.n - 1]))
    }

    /// (phi, psi, phi', psi') with the derivatives from the first-order
    /// differential system; valid in the open support.
    pub fn phi_psi_derivs(&self, x: f64) -> Result<(f64, f64, f64, f64)> {
        let (phi, psi) = self.phi_psi(x)?;
        let cp = self.coefficient_polynomials();
        let m = cp.m(x);
        if m == 0.0 {
            return Err(Error::domain("phi_psi_derivs", format!("m(x) vanishes at x = {x}")));
        }
        let dphi = (cp.a(x) * phi + cp.b(x) * psi) / m;
        let dpsi = (-cp.c(x) * phi - cp.a(x) * psi) / m;
        Ok((phi, psi, dphi, dpsi))
    }

    /// The pair with the weight factor left out:
    /// (sqrt(a_{N-1}/a_N) p_N, sqrt(a_{N-1}/a_N) p_{N-1}).
    pub fn phi_psi_unweighted(&self, x: f64) -> (f64, f64) {
        let vals = self.poly_values(x, self.n);
        let root = self.lead_ratio.sqrt();
        (root * vals[self.n], root * vals[self.n - 1])
    }

    /// K_N(x, x) / w(x), finite on the closed support.
    pub fn kernel_diag_unweighted(&self, x: f64) -> f64 {
        let (phi, psi) = self.phi_psi_unweighted(x);
        let cp = self.coefficient_polynomials();
        let m = cp.m(x);
        (cp.c(x) * phi * phi + cp.b(x) * psi * psi + 2.0 * cp.a(x) * phi * psi) / m
    }

    /// Christoffel-Darboux kernel K_N(x, y); the diagonal is taken through
    /// the analytic derivative limit, not finite differences.
    pub fn kernel(&self, x: f64, y: f64) -> f64 {
        if x == y {
            return self.kernel_diag(x);
        }
        let (px, sx) = self.phi_psi(x).unwrap_or((0.0, 0.0));
        let (py, sy) = self.phi_psi(y).unwrap_or((0.0, 0.0));
        (px * sy - py * sx) / (x - y)
    }

    /// K_N(x, x) = (C phi^2 + B psi^2 + 2 A phi psi) / m.
    pub fn kernel_diag(&self, x: f64) -> f64 {
        let (phi, psi) = match self.phi_psi(x) {
            Ok(v) => v,
            Err(_) => return 0.0,
        };
        let cp = self.coefficient_polynomials();
        let m = cp.m(x);
        (cp.c(x) * phi * phi + cp.b(x) * psi * psi + 2.0 * cp.a(x) * phi * psi) / m
    }

    /// Direct summation form of the kernel (the slow route; used as an
    /// oracle against the Christoffel-Darboux form).
    pub fn kernel_direct_sum(&self, x: f64, y: f64) -> f64 {
        let qx = self.weighted_values(x, self.n - 1);
        let qy = self.weighted_values(y, self.n - 1);
        qx.iter().zip(&qy).map(|(a, b)| a * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadratureRule;

    #[test]
    fn hermite_low_degrees() {
        let basis = OrthonormalBasis::new(WeightSpec::Hermite, 4).unwrap();
        let pi_m14 = std::f64::consts::PI.powf(-0.25);
        for &x in &[-1.3, 0.0, 0.4, 2.2] {
            assert!((basis.eval_orthonormal(0, x).unwrap() - pi_m14).abs() < 1e-15);
            let expect = pi_m14 * std::f64::consts::SQRT_2 * x;
            assert!((basis.eval_orthonormal(1, x).unwrap() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn leading_coeff_ratio_matches_explicit_formulas() {
        // Hermite: a_N = 2^{N/2} pi^{-1/4} (N!)^{-1/2} so a_{N-1}/a_N = sqrt(N/2).
        for n in 1..=12 {
            let basis = OrthonormalBasis::new(WeightSpec::Hermite, n).unwrap();
            assert!((basis.leading_coeff_ratio() - (n as f64 / 2.0).sqrt()).abs() < 1e-14);
        }
        // Jacobi explicit ratio.
        for &(n, alpha, beta) in &[(1usize, 0.0, 0.0), (3, 0.5, 0.5), (5, 2.0, 1.0), (2, -0.3, 0.7)] {
            let basis = OrthonormalBasis::new(WeightSpec::Jacobi { alpha, beta }, n).unwrap();
            let nf = n as f64;
            let d = 2.0 * nf + alpha + beta;
            let expect = 2.0
                * (nf * (nf + alpha) * (nf + beta) * (nf + alpha + beta) / (d * d * (d + 1.0) * (d - 1.0))).sqrt();
            assert!(
                (basis.leading_coeff_ratio() - expect).abs() < 1e-14,
                "n = {n}, alpha = {alpha}, beta = {beta}"
            );
        }
    }

    #[test]
    fn coefficient_polynomials_match_explicit_instances() {
        let cp = CoefficientPolynomials::for_weight(&WeightSpec::Hermite, 3);
        assert_eq!(cp.mu0, 1.0);
        assert_eq!(cp.mu2, 0.0);
        assert_eq!(cp.alpha1, -1.0);
        assert!((cp.beta0 - 6.0f64.sqrt()).abs() < 1e-15);
        assert_eq!(cp.beta0, cp.gamma0);
        assert_eq!(cp.alpha0, 0.0);

        let cp = CoefficientPolynomials::for_weight(&WeightSpec::Jacobi { alpha: 2.0, beta: 1.0 }, 2);
        let d = 2.0 * 2.0 + 3.0;
        assert_eq!(cp.mu0, 1.0);
        assert_eq!(cp.mu2, -1.0);
        assert!((cp.alpha0 - (1.0 - 4.0) / (2.0 * d)).abs() < 1e-15);
        assert!((cp.alpha1 + d / 2.0).abs() < 1e-15);
        let root = 2.0 * (2.0f64 * 4.0 * 3.0 * 5.0).sqrt() / d;
        assert!((cp.beta0 - root * (8.0f64 / 6.0).sqrt()).abs() < 1e-14);
        assert!((cp.gamma0 - root * (6.0f64 / 8.0).sqrt()).abs() < 1e-14);
        assert_eq!(cp.beta1, 0.0);
        assert_eq!(cp.gamma1, 0.0);
    }

    #[test]
    fn orthonormality_under_quadrature() {
        // Hermite: truncate the line (weight decays as exp(-x^2)).
        let basis = OrthonormalBasis::new(WeightSpec::Hermite, 9).unwrap();
        let rule = QuadratureRule::legendre(260).unwrap();
        let limit = (2.0f64 * 9.0).sqrt() + 10.0;
        for m in 0..=8usize {
            for n in m..=8usize {
                let got = rule.integrate(-limit, limit, |x| {
                    let q = basis.weighted_values(x, 8);
                    q[m] * q[n]
                });
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((got - expect).abs() < 1e-10, "Hermite ({m}, {n}): {got}");
            }
        }
        // Jacobi with a singular endpoint exponent.
        let basis = OrthonormalBasis::new(WeightSpec::Jacobi { alpha: -0.4, beta: 1.3 }, 9).unwrap();
        let rule = QuadratureRule::jacobi(120, -0.4, 1.3).unwrap();
        for m in 0..=8usize {
            for n in m..=8usize {
                let got = rule.integrate(-1.0, 1.0, |x| {
                    let p = basis.poly_values(x, 8);
                    p[m] * p[n]
                });
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((got - expect).abs() < 1e-10, "Jacobi ({m}, {n}): {got}");
            }
        }
    }

    #[test]
    fn phi_psi_satisfy_first_order_system() {
        let h = 1e-5;
        for (weight, xs) in [
            (WeightSpec::Hermite, vec![-2.0, -0.7, 0.3, 1.9, 3.5]),
            (WeightSpec::Jacobi { alpha: 0.5, beta: 0.5 }, vec![-0.8, -0.2, 0.1, 0.6, 0.9]),
            (WeightSpec::Jacobi { alpha: 2.0, beta: 1.0 }, vec![-0.8, -0.2, 0.1, 0.6, 0.9]),
        ] {
            for n in [1usize, 2, 5] {
                let basis = OrthonormalBasis::new(weight, n).unwrap();
                for &x in &xs {
                    let (_, _, dphi, dpsi) = basis.phi_psi_derivs(x).unwrap();
                    let (pp, _) = basis.phi_psi(x + h).unwrap();
                    let (pm, _) = basis.phi_psi(x - h).unwrap();
                    let (_, sp) = basis.phi_psi(x + h).unwrap();
                    let (_, sm) = basis.phi_psi(x - h).unwrap();
                    let fd_phi = (pp - pm) / (2.0 * h);
                    let fd_psi = (sp - sm) / (2.0 * h);
                    assert!((fd_phi - dphi).abs() < 1e-7 * dphi.abs().max(1.0), "phi' at {x}, n = {n}");
                    assert!((fd_psi - dpsi).abs() < 1e-7 * dpsi.abs().max(1.0), "psi' at {x}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn legendre_weight_pair_from_explicit_low_degrees() {
        // alpha = beta = 0, N = 1: p0 = 1/sqrt(2), p1 = sqrt(3/2) x, unit
        // weight; phi and psi follow from the leading-coefficient ratio.
        let basis = OrthonormalBasis::new(WeightSpec::Jacobi { alpha: 0.0, beta: 0.0 }, 1).unwrap();
        let x = 0.5;
        let ratio: f64 = 1.0 / 3.0f64.sqrt(); // a_0 / a_1
        let (phi, psi) = basis.phi_psi(x).unwrap();
        assert!((phi - ratio.sqrt() * (1.5f64).sqrt() * x).abs() < 1e-14);
        assert!((psi - ratio.sqrt() * (0.5f64).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn hermite_parity_is_bit_exact() {
        for n in 1..=6 {
            let basis = OrthonormalBasis::new(WeightSpec::Hermite, n).unwrap();
            let sign_phi = if n % 2 == 0 { 1.0 } else { -1.0 };
            for &x in &[0.3, 1.1, 2.4, 4.9] {
                let (phi_p, psi_p) = basis.phi_psi(x).unwrap();
                let (phi_m, psi_m) = basis.phi_psi(-x).unwrap();
                assert_eq!(phi_m, sign_phi * phi_p);
                assert_eq!(psi_m, -sign_phi * psi_p);
            }
        }
    }

    #[test]
    fn jacobi_symmetric_parity() {
        let basis = OrthonormalBasis::new(WeightSpec::Jacobi { alpha: 1.5, beta: 1.5 }, 3).unwrap();
        let x = 0.4;
        let plus = basis.eval_orthonormal(3, x).unwrap();
        let minus = basis.eval_orthonormal(3, -x).unwrap();
        assert_eq!(minus, -plus);
    }

    #[test]
    fn hermite_n1_kernel_diag_closed_form() {
        let basis = OrthonormalBasis::new(WeightSpec::Hermite, 1).unwrap();
        for &s in &[0.0f64, 0.5, 1.7, 3.0] {
            let expect = (-s * s).exp() / crate::specfun::SQRT_PI;
            assert!((basis.kernel_diag(s) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn kernel_cd_form_matches_direct_sum() {
        let basis = OrthonormalBasis::new(WeightSpec::Hermite, 4).unwrap();
        let got = basis.kernel(0.3, 0.7);
        let oracle = basis.kernel_direct_sum(0.3, 0.7);
        assert!((got - oracle).abs() < 1e-12, "{got} vs {oracle}");
        // symmetry on a deterministic set of pairs
        for i in 0..10 {
            let x = -1.5 + 0.31 * i as f64;
            let y = 0.83 * ((i * i) as f64).sin();
            assert_eq!(basis.kernel(x, y), basis.kernel(y, x));
        }
    }

    #[test]
    fn kernel_diag_nonnegative() {
        for (weight, lo, hi) in [
            (WeightSpec::Hermite, -4.0, 4.0),
            (WeightSpec::Jacobi { alpha: 0.5, beta: 0.5 }, -0.999, 0.999),
        ] {
            let basis = OrthonormalBasis::new(weight, 5).unwrap();
            for i in 0..=80 {
                let x = lo + (hi - lo) * i as f64 / 80.0;
                assert!(basis.kernel_diag(x) >= -1e-13, "x = {x}");
            }
        }
    }

    #[test]
    fn degree_cap_enforced() {
        let basis = OrthonormalBasis::new(WeightSpec::Hermite, 3).unwrap();
        assert!(basis.eval_orthonormal(4, 0.5).is_err());
        assert!(OrthonormalBasis::new(WeightSpec::Hermite, 0).is_err());
    }
}
