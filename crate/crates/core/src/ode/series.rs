//! Small-gap Laurent series of the Hermite-exterior resolvent value R(s),
//! computed by exact rational arithmetic.
//!
//! The companion quantity b = s R-tilde has an even Taylor series whose
//! coefficients are fixed recursively by the second-order equation it
//! satisfies; R then follows from the first-order relation
//! s a' = a + 2 s^2 b - 2 b^2 with a = s R. Everything is done in the
//! variable t = s^2 so parity is structural.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Poly = Vec<BigRational>;

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, o) in out.iter_mut().enumerate() {
        if i < a.len() {
            *o += &a[i];
        }
        if i < b.len() {
            *o += &b[i];
        }
    }
    out
}

fn poly_mul(a: &Poly, b: &Poly, cap: usize) -> Poly {
    let mut out = vec![BigRational::zero(); cap.min(a.len() + b.len()).max(1)];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() || i >= cap {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= cap {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_scale(a: &Poly, c: &BigRational) -> Poly {
    a.iter().map(|x| x * c).collect()
}

fn poly_shift(a: &Poly, by: usize, cap: usize) -> Poly {
    let mut out = vec![BigRational::zero(); (a.len() + by).min(cap).max(1)];
    for (i, ai) in a.iter().enumerate() {
        if i + by < cap {
            out[i + by] = ai.clone();
        }
    }
    out
}

/// d/dt of a t-series.
fn poly_d(a: &Poly) -> Poly {
    if a.len() <= 1 {
        return vec![BigRational::zero()];
    }
    a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from(BigInt::from(i as i64))).collect()
}

/// Residual series of the b-equation, in the variable t = s^2:
/// `t (2Db + 4t D^2 b + 8N b + 24 b^2)^2 - 4 (t + 2b)^2 (4t (Db)^2 + 8N b^2 + 16 b^3)`.
fn b_equation_residual(b: &Poly, n: usize, cap: usize) -> Poly {
    let eight_n = rat(8 * n as i64, 1);
    let db = poly_d(b);
    let d2b = poly_d(&db);
    // 2 Db + 4 t D^2 b + 8N b + 24 b^2
    let mut inner = poly_scale(&db, &rat(2, 1));
    inner = poly_add(&inner, &poly_shift(&poly_scale(&d2b, &rat(4, 1)), 1, cap));
    inner = poly_add(&inner, &poly_scale(b, &eight_n));
    inner = poly_add(&inner, &poly_scale(&poly_mul(b, b, cap), &rat(24, 1)));
    let lhs = poly_shift(&poly_mul(&inner, &inner, cap), 1, cap);

    // t + 2b
    let mut t_plus = poly_scale(b, &rat(2, 1));
    while t_plus.len() < 2 {
        t_plus.push(BigRational::zero());
    }
    t_plus[1] += BigRational::one();
    let t_plus_sq = poly_mul(&t_plus, &t_plus, cap);
    // 4 t (Db)^2 + 8N b^2 + 16 b^3
    let b2 = poly_mul(b, b, cap);
    let mut bracket = poly_shift(&poly_scale(&poly_mul(&db, &db, cap), &rat(4, 1)), 1, cap);
    bracket = poly_add(&bracket, &poly_scale(&b2, &eight_n));
    bracket = poly_add(&bracket, &poly_scale(&poly_mul(&b2, b, cap), &rat(16, 1)));
    let rhs = poly_scale(&poly_mul(&t_plus_sq, &bracket, cap), &rat(4, 1));

    poly_add(&lhs, &poly_scale(&rhs, &rat(-1, 1)))
}

/// Coefficients of the b = s R-tilde series in t = s^2, `count` of them.
fn b_series(n: usize, count: usize) -> Result<Poly> {
    let nf = n as i64;
    let mut b: Poly = Vec::with_capacity(count);
    b.push(rat(-nf, 2));
    if count > 1 {
        b.push(rat(nf * nf, 4 * nf * nf - 1));
    }
    let cap = 2 * count + 4;
    while b.len() < count {
        let idx = b.len();
        // The next coefficient enters the residual linearly; probe at 0 and 1.
        let mut b0 = b.clone();
        b0.push(BigRational::zero());
        let mut b1 = b.clone();
        b1.push(BigRational::one());
        let r0 = b_equation_residual(&b0, n, cap);
        let r1 = b_equation_residual(&b1, n, cap);
        let mut pivot = None;
        for j in 0..r0.len().min(r1.len()) {
            if r0[j] != r1[j] {
                pivot = Some(j);
                break;
            }
            if !r0[j].is_zero() {
                return Err(Error::non_convergence(
                    "small_s_recursion",
                    format!("residual order {j} nonzero before coefficient {idx} could absorb it"),
                ));
            }
        }
        let Some(j) = pivot else {
            return Err(Error::non_convergence("small_s_recursion", format!("coefficient {idx} unconstrained")));
        };
        let denom = &r1[j] - &r0[j];
        let value = -&r0[j] / denom;
        b.push(value);
    }
    Ok(b)
}

/// Laurent coefficients of R about s = 0: returns
/// [b_{-1}, b_1, b_3, ...] (`terms` of them, terms <= 12) as exact rationals.
/// The leading one is N^2/2.
pub fn small_s_recursion(n: usize, terms: usize) -> Result<Vec<BigRational>> {
    if n == 0 {
        return Err(Error::domain("small_s_recursion", "N must be positive"));
    }
    if terms == 0 || terms > 12 {
        return Err(Error::domain("small_s_recursion", format!("terms = {terms} outside 1..=12")));
    }
    let b = b_series(n, terms + 2)?;
    // (2j - 1) a_j = [2 t b - 2 b^2]_j
    let cap = terms + 2;
    let mut rhs = poly_shift(&poly_scale(&b, &rat(2, 1)), 1, cap);
    rhs = poly_add(&rhs, &poly_scale(&poly_mul(&b, &b, cap), &rat(-2, 1)));
    let mut a = Vec::with_capacity(terms);
    for j in 0..terms {
        let coef = if j < rhs.len() { rhs[j].clone() } else { BigRational::zero() };
        a.push(coef / rat(2 * j as i64 - 1, 1));
    }
    Ok(a)
}

/// The same coefficients as f64.
pub fn small_s_coeffs_f64(n: usize, terms: usize) -> Result<Vec<f64>> {
    Ok(small_s_recursion(n, terms)?.iter().map(rational_to_f64).collect())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    // Scale down in tandem to stay inside f64 range (our magnitudes are tame).
    let num = r.numer();
    let den = r.denom();
    let nf = bigint_to_f64(num);
    let df = bigint_to_f64(den);
    nf / df
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    let s = x.to_string();
    s.parse::<f64>().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Evaluate the truncated series R(s) ~ b_{-1}/s + b_1 s + b_3 s^3 + ...
pub fn eval_small_s_r(coeffs: &[f64], s: f64) -> f64 {
    let mut acc = coeffs[0] / s;
    let mut pow = s;
    for c in &coeffs[1..] {
        acc += c * pow;
        pow *= s * s;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rr(num: i64, den: i64) -> BigRational {
        rat(num, den)
    }

    #[test]
    fn leading_coefficient_is_half_n_squared() {
        for n in 1..=6usize {
            let c = small_s_recursion(n, 2).unwrap();
            assert_eq!(c[0], rr((n * n) as i64, 2));
        }
    }

    #[test]
    fn general_n_coefficients_match_explicit_rationals() {
        for n in 1..=6usize {
            let c = small_s_recursion(n, 5).unwrap();
            let nn = BigInt::from(n as i64);
            let n2 = BigRational::from(&nn * &nn);
            let four_n2 = &n2 * rr(4, 1);
            let b1 = -BigRational::from(nn.clone()) * (&n2 * rr(2, 1) - rr(1, 1)) / (&four_n2 - rr(1, 1));
            assert_eq!(c[1], b1, "b1 at N = {n}");
            let d1 = &four_n2 - rr(1, 1);
            let d9 = &four_n2 - rr(9, 1);
            let b3 = rr(2, 1) * &n2 * (&n2 * &n2 * rr(4, 1) - &n2 * rr(9, 1) + rr(3, 1)) / (&d1 * &d1 * &d9);
            assert_eq!(c[2], b3, "b3 at N = {n}");
            let d25 = &four_n2 - rr(25, 1);
            let b5 = rr(8, 1) * &n2 * BigRational::from(nn.clone())
                * (&n2 * &n2 * rr(4, 1) - &n2 * rr(13, 1) + rr(6, 1))
                / (&d1 * &d1 * &d1 * &d9 * &d25);
            assert_eq!(c[3], b5, "b5 at N = {n}");
            let d49 = &four_n2 - rr(49, 1);
            let n4 = &n2 * &n2;
            let n6 = &n4 * &n2;
            let n8 = &n6 * &n2;
            let n10 = &n8 * &n2;
            let poly = &n10 * rr(128, 1) - &n8 * rr(1312, 1) + &n6 * rr(3304, 1) - &n4 * rr(3430, 1)
                + &n2 * rr(1355, 1)
                - rr(315, 1);
            let b7 = rr(8, 1) * &n2 * poly / (&d1 * &d1 * &d1 * &d1 * &d9 * &d9 * &d25 * &d49);
            assert_eq!(c[4], b7, "b7 at N = {n}");
        }
    }

    #[test]
    fn n1_and_n2_full_series_match_explicit_values() {
        let c1 = small_s_recursion(1, 7).unwrap();
        let expect1 = [
            rr(1, 2),
            rr(-1, 3),
            rr(4, 45),
            rr(-8, 945),
            rr(-16, 14175),
            rr(32, 93555),
            rr(1472, 638_512_875),
        ];
        assert_eq!(c1, expect1);
        let c2 = small_s_recursion(2, 7).unwrap();
        let expect2 = [
            rr(2, 1),
            rr(-14, 15),
            rr(248, 1575),
            rr(-128, 23625),
            rr(-51_104, 27_286_875),
            rr(1_356_032, 5_320_940_625),
            rr(6_898_816, 558_698_765_625),
        ];
        assert_eq!(c2, expect2);
    }

    #[test]
    fn series_matches_n1_closed_form() {
        // R = e^{-s^2} / (sqrt(pi) erf s) at small s.
        let coeffs = small_s_coeffs_f64(1, 7).unwrap();
        for &s in &[0.02, 0.05, 0.1] {
            let series = eval_small_s_r(&coeffs, s);
            let exact = crate::closedform::gue_closed(1, s).unwrap().r_diag.unwrap();
            assert!((series - exact).abs() < 1e-12 * exact, "s = {s}: {series} vs {exact}");
        }
    }

    #[test]
    fn truncation_order_improves_error() {
        // At s = 0.1 the error drops by >= 100x between the b1 and b7 truncations.
        for n in 1..=4usize {
            let short = small_s_coeffs_f64(n, 2).unwrap();
            let long = small_s_coeffs_f64(n, 5).unwrap();
            let exact = small_s_coeffs_f64(n, 9).unwrap();
            let s = 0.1;
            let reference = eval_small_s_r(&exact, s);
            let err_short = (eval_small_s_r(&short, s) - reference).abs();
            let err_long = (eval_small_s_r(&long, s) - reference).abs();
            assert!(err_short > 1e2 * err_long, "n = {n}: {err_short} vs {err_long}");
        }
    }

    #[test]
    fn rejects_out_of_range_requests() {
        assert!(small_s_recursion(0, 3).is_err());
        assert!(small_s_recursion(2, 0).is_err());
        assert!(small_s_recursion(2, 13).is_err());
    }
}
