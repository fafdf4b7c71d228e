//! Exact finite-rank evaluation of the gap probability E2(0; I) as a Gram
//! determinant det(delta_jk - int_I p_j p_k w), plus the even/odd
//! factorization identity for symmetric regions of even weights.
//!
//! The projection kernel has rank N, so no Nystrom discretization is
//! involved: the only numerical error is the quadrature of the N^2 Gram
//! entries, and `est_error` reports the change under doubling the rule.

use crate::error::{Error, Result};
use crate::geometry::{GapGeometry, IntervalSet};
use crate::linalg::{log_det_lu, LogDet, Mat};
use crate::orthopoly::{OrthonormalBasis, WeightSpec};
use crate::quadrature::QuadratureRule;

/// Gap probability with an order-refinement error estimate.
#[derive(Debug, Clone, Copy)]
pub struct GapProbabilityResult {
    pub value: f64,
    /// |E2(order) - E2(2 order)|.
    pub est_error: f64,
    /// ln E2, kept separately because E2 underflows for large s N^2.
    pub ln_value: f64,
}

/// Truncation point for the unbounded Hermite tails: beyond this the weight
/// is far below f64 resolution relative to every Gram entry.
pub fn hermite_cutoff(n: usize) -> f64 {
    (2.0 * n as f64).sqrt() + 16.0
}

fn concrete_region(basis: &OrthonormalBasis, region: &IntervalSet) -> IntervalSet {
    match basis.weight_spec() {
        WeightSpec::Hermite => {
            let cut = hermite_cutoff(basis.ensemble_size());
            region.clipped(-cut, cut)
        }
        WeightSpec::Jacobi { .. } => region.clipped(-1.0, 1.0),
    }
}

/// Accumulate `sum_i w_i v(x_i) v(x_i)^T` into `g` for the row index set
/// `rows` (selecting which polynomial degrees form the block).
fn accumulate_interval(
    basis: &OrthonormalBasis,
    g: &mut Mat,
    rows: &[usize],
    lo: f64,
    hi: f64,
    order: usize,
    scale: f64,
) -> Result<()> {
    let max_degree = *rows.iter().max().expect("nonempty row set");
    let nodes: Vec<(f64, f64)> = match *basis.weight_spec() {
        WeightSpec::Hermite => QuadratureRule::legendre(order)?.mapped(lo, hi),
        WeightSpec::Jacobi { alpha, beta } => {
            let absorb_right = hi == 1.0 && alpha != 0.0;
            let absorb_left = lo == -1.0 && beta != 0.0;
            let rule = if absorb_right || absorb_left {
                QuadratureRule::jacobi(order, if absorb_right { alpha } else { 0.0 }, if absorb_left { beta } else { 0.0 })?
            } else {
                QuadratureRule::legendre(order)?
            };
            rule.mapped(lo, hi)
                .into_iter()
                .map(|(x, w)| {
                    let mut w = w;
                    if !absorb_right {
                        w *= (1.0 - x).powf(alpha);
                    }
                    if !absorb_left {
                        w *= (1.0 + x).powf(beta);
                    }
                    (x, w)
                })
                .collect()
        }
    };
    for (x, w) in nodes {
        // For Hermite the weight rides inside the recurrence (overflow-safe);
        // for Jacobi it has been folded into the node weight above.
        let vals: Vec<f64> = match basis.weight_spec() {
            WeightSpec::Hermite => basis.weighted_values(x, max_degree),
            WeightSpec::Jacobi { .. } => basis.poly_values(x, max_degree),
        };
        for (bi, &di) in rows.iter().enumerate() {
            for (bj, &dj) in rows.iter().enumerate().skip(bi) {
                let add = scale * w * vals[di] * vals[dj];
                g[(bi, bj)] += add;
                if bj != bi {
                    g[(bj, bi)] += add;
                }
            }
        }
    }
    Ok(())
}

fn gram_block(basis: &OrthonormalBasis, region: &IntervalSet, rows: &[usize], order: usize, scale: f64) -> Result<Mat> {
    let mut g = Mat::zeros(rows.len());
    for &(lo, hi) in concrete_region(basis, region).intervals() {
        accumulate_interval(basis, &mut g, rows, lo, hi, order, scale)?;
    }
    Ok(g)
}

/// Gram matrix G_jk = int_region p_j p_k w for j, k < N.
pub fn gram_matrix(basis: &OrthonormalBasis, region: &IntervalSet, quad: &QuadratureRule) -> Result<Mat> {
    let n = basis.ensemble_size();
    if quad.order < 2 * n {
        return Err(Error::QuadratureTooCoarse { order: quad.order, n });
    }
    let rows: Vec<usize> = (0..n).collect();
    gram_block(basis, region, &rows, quad.order, 1.0)
}

fn det_i_minus(g: &Mat) -> LogDet {
    let n = g.n;
    let mut m = Mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = f64::from(u8::from(i == j)) - g[(i, j)];
        }
    }
    log_det_lu(m)
}

fn e2_log_at_order(basis: &OrthonormalBasis, geometry: &GapGeometry, order: usize) -> Result<LogDet> {
    let n = basis.ensemble_size();
    let rows: Vec<usize> = (0..n).collect();
    match (geometry, basis.weight_spec()) {
        (GapGeometry::ExteriorSym { s }, WeightSpec::Hermite) => {
            // det(I - G_I) over the unbounded exterior equals det(G) over
            // the bounded complement [-s, s], by orthonormality.
            let inner = IntervalSet::new(vec![(-*s, *s)])?;
            let g = gram_block(basis, &inner, &rows, order, 1.0)?;
            Ok(log_det_lu(g))
        }
        _ => {
            let region = geometry.region();
            let g = gram_block(basis, &region, &rows, order, 1.0)?;
            Ok(det_i_minus(&g))
        }
    }
}

/// Gap probability by the Gram-determinant route.
pub fn gap_probability(
    basis: &OrthonormalBasis,
    geometry: &GapGeometry,
    quad: &QuadratureRule,
) -> Result<GapProbabilityResult> {
    geometry.validate_for(basis.weight_spec())?;
    let n = basis.ensemble_size();
    if quad.order < 2 * n {
        return Err(Error::QuadratureTooCoarse { order: quad.order, n });
    }
    let coarse = e2_log_at_order(basis, geometry, quad.order)?;
    let fine = e2_log_at_order(basis, geometry, quad.order * 2)?;
    let value = fine.value();
    let est_error = (coarse.value() - value).abs();
    let ln_value = if fine.sign > 0.0 { fine.ln_abs } else { f64::NAN };
    Ok(GapProbabilityResult { value, est_error, ln_value })
}

/// ln E2 for the Hermite exterior at small gap parameter, through the
/// factorization det G = s^N (det B)^2 det W with B the triangular
/// change of basis from p_j(s u) to Legendre polynomials in u and W the
/// O(1) Legendre-basis weight matrix. Unlike a direct LU of the Gram
/// matrix (near rank one as s -> 0, so its pivots cancel catastrophically),
/// every factor here is well conditioned at any s.
pub fn hermite_exterior_ln_e2_small_s(basis: &OrthonormalBasis, s: f64) -> Result<f64> {
    let n = basis.ensemble_size();
    if !matches!(basis.weight_spec(), WeightSpec::Hermite) {
        return Err(Error::domain("hermite_exterior_ln_e2_small_s", "Hermite weight required"));
    }
    if !(s > 0.0) {
        return Err(Error::domain("hermite_exterior_ln_e2_small_s", "s must be positive"));
    }
    let quad = QuadratureRule::legendre((n + 12).max(24))?;
    // Legendre values at the quadrature nodes, by recurrence.
    let legendre_at = |u: f64| -> Vec<f64> {
        let mut vals = vec![1.0, u];
        for m in 1..n {
            let mf = m as f64;
            vals.push(((2.0 * mf + 1.0) * u * vals[m] - mf * vals[m - 1]) / (mf + 1.0));
        }
        vals
    };
    let nodes = quad.mapped(-1.0, 1.0);
    let mut b = Mat::zeros(n);
    let mut w = Mat::zeros(n);
    for &(u, wt) in &nodes {
        let lv = legendre_at(u);
        let pv = basis.poly_values(s * u, n.saturating_sub(1));
        let weight = (-s * s * u * u).exp();
        for j in 0..n {
            for m in 0..n {
                b[(j, m)] += wt * pv[j] * lv[m];
            }
        }
        for m in 0..n {
            for l in m..n {
                let add = wt * lv[m] * lv[l] * weight;
                w[(m, l)] += add;
                if l != m {
                    w[(l, m)] += add;
                }
            }
        }
    }
    let mut ln = n as f64 * s.ln();
    for j in 0..n {
        // normalize the projection: B_{jm} = (2m+1)/2 int p_j(su) L_m
        let coeff = b[(j, j)] * (2.0 * j as f64 + 1.0) / 2.0;
        ln += 2.0 * coeff.abs().ln();
    }
    let ldw = log_det_lu(w);
    if ldw.sign <= 0.0 {
        return Err(Error::non_convergence("hermite_exterior_ln_e2_small_s", "weight matrix lost positivity"));
    }
    ln += ldw.ln_abs;
    Ok(ln)
}

/// Both sides of the even/odd factorization identity for an even weight and
/// a symmetric region.
#[derive(Debug, Clone, Copy)]
pub struct FactorizationCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
}

/// lhs: the full N x N Gram determinant over the symmetric region.
/// rhs: the product of the two determinants over the even and odd degree
/// blocks, each computed from fresh quadratures over the positive half of
/// the region (the squared-variable form of the identity, realized through
/// the substitution y = x^2 which maps those factors onto the even/odd
/// orthonormal polynomials).
pub fn factorization_check(
    n: usize,
    weight: &WeightSpec,
    geometry: &GapGeometry,
    quad: &QuadratureRule,
) -> Result<FactorizationCheck> {
    if !weight.is_even() {
        return Err(Error::precondition("factorization_check", "weight must be even (Hermite or Jacobi alpha = beta)"));
    }
    if !geometry.is_symmetric() {
        return Err(Error::precondition("factorization_check", "region must be symmetric about the origin"));
    }
    let basis = OrthonormalBasis::new(*weight, n)?;
    let lhs = gap_probability(&basis, geometry, quad)?;

    let positive_part = concrete_region(&basis, &geometry.region()).clipped(0.0, f64::INFINITY);
    let order = quad.order;
    let even_rows: Vec<usize> = (0..n.div_ceil(2)).map(|j| 2 * j).collect();
    let odd_rows: Vec<usize> = (0..n / 2).map(|j| 2 * j + 1).collect();
    let mut ln_rhs = 0.0;
    let mut sign_rhs = 1.0;
    for rows in [even_rows, odd_rows] {
        if rows.is_empty() {
            continue; // empty determinant is 1
        }
        let g = gram_block(&basis, &positive_part, &rows, order, 2.0)?;
        let ld = det_i_minus(&g);
        ln_rhs += ld.ln_abs;
        sign_rhs *= ld.sign;
    }
    let rhs = sign_rhs * ln_rhs.exp();
    Ok(FactorizationCheck { lhs: lhs.value, rhs, abs_diff: (lhs.value - rhs).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{erf, tests_support::panel_integral};

    fn hermite(n: usize) -> OrthonormalBasis {
        OrthonormalBasis::new(WeightSpec::Hermite, n).unwrap()
    }

    fn jacobi(n: usize, alpha: f64, beta: f64) -> OrthonormalBasis {
        OrthonormalBasis::new(WeightSpec::Jacobi { alpha, beta }, n).unwrap()
    }

    #[test]
    fn gram_empty_region_is_zero() {
        let basis = hermite(3);
        let quad = QuadratureRule::legendre(40).unwrap();
        let g = gram_matrix(&basis, &IntervalSet::empty(), &quad).unwrap();
        assert!(g.data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gram_full_support_is_identity() {
        let quad = QuadratureRule::legendre(200).unwrap();
        let full = IntervalSet::new(vec![(f64::NEG_INFINITY, f64::INFINITY)]).unwrap();
        let g = gram_matrix(&hermite(5), &full, &quad).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - expect).abs() < 1e-12, "({i}, {j})");
            }
        }
        let full = IntervalSet::new(vec![(-1.0, 1.0)]).unwrap();
        let g = gram_matrix(&jacobi(4, 0.5, 1.5), &full, &quad).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - expect).abs() < 1e-12, "({i}, {j})");
            }
        }
    }

    #[test]
    fn hermite_n1_gram_entry_is_erf() {
        let basis = hermite(1);
        let quad = QuadratureRule::legendre(60).unwrap();
        for &s in &[0.4, 1.0, 2.3] {
            let inner = IntervalSet::new(vec![(-s, s)]).unwrap();
            let g = gram_matrix(&basis, &inner, &quad).unwrap();
            assert!((g[(0, 0)] - erf(s)).abs() < 1e-13, "s = {s}");
        }
    }

    #[test]
    fn hermite_n1_exterior_gap_is_erf() {
        let basis = hermite(1);
        let quad = QuadratureRule::legendre(60).unwrap();
        for &s in &[0.3, 1.0, 2.0, 3.0] {
            let r = gap_probability(&basis, &GapGeometry::ExteriorSym { s }, &quad).unwrap();
            assert!((r.value - erf(s)).abs() < 1e-12, "s = {s}: {} vs {}", r.value, erf(s));
        }
    }

    #[test]
    fn flat_jacobi_exterior_gap_is_power_law() {
        // alpha = beta = 0: E2 = s^{N^2}.
        let quad = QuadratureRule::legendre(120).unwrap();
        for n in 1..=4usize {
            let basis = jacobi(n, 0.0, 0.0);
            for &s in &[0.3, 0.7, 0.9] {
                let r = gap_probability(&basis, &GapGeometry::JacobiExteriorSym { s }, &quad).unwrap();
                let expect = s.powi((n * n) as i32);
                assert!((r.value - expect).abs() < 1e-11, "n = {n}, s = {s}: {} vs {expect}", r.value);
            }
        }
    }

    #[test]
    fn interior_zero_gap_is_one() {
        let quad = QuadratureRule::legendre(80).unwrap();
        let r = gap_probability(&jacobi(3, 1.0, 1.0), &GapGeometry::InteriorSym { s: 0.0 }, &quad).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn truncated_fredholm_expansion_oracle() {
        // For N = 1, 2 the Fredholm series terminates at n = N; compare the
        // determinant against the explicitly integrated expansion terms.
        let quad = QuadratureRule::legendre(90).unwrap();
        let s = 0.8;

        let basis = hermite(1);
        let tr = panel_integral(|x| basis.kernel_diag(x), s, 8.0, 96) * 2.0;
        let det = gap_probability(&basis, &GapGeometry::ExteriorSym { s }, &quad).unwrap().value;
        assert!((det - (1.0 - tr)).abs() < 1e-10);

        let basis = hermite(2);
        let tr = panel_integral(|x| basis.kernel_diag(x), s, 8.5, 128) * 2.0;
        // n = 2 term (1/2) int int_{I x I} [K(x,x)K(y,y) - K(x,y)^2], folded
        // onto the positive half by the reflection symmetry of the kernel.
        let inner = |x: f64| {
            panel_integral(
                |y| {
                    let kxy = basis.kernel(x, y);
                    let kxmy = basis.kernel(x, -y);
                    2.0 * basis.kernel_diag(x) * basis.kernel_diag(y) - kxy * kxy - kxmy * kxmy
                },
                s,
                8.5,
                64,
            )
        };
        let double: f64 = panel_integral(inner, s, 8.5, 64);
        let det = gap_probability(&basis, &GapGeometry::ExteriorSym { s }, &quad).unwrap().value;
        assert!((det - (1.0 - tr + double)).abs() < 1e-10, "{det} vs {}", 1.0 - tr + double);
    }

    #[test]
    fn explicit_asymmetric_region() {
        // N = 1 Hermite over a one-sided interval: E2 = 1 - (erf(b) - erf(a))/2.
        let basis = hermite(1);
        let quad = QuadratureRule::legendre(60).unwrap();
        let region = IntervalSet::new(vec![(0.2, 0.9)]).unwrap();
        let r = gap_probability(&basis, &GapGeometry::Explicit(region), &quad).unwrap();
        let expect = 1.0 - 0.5 * (erf(0.9) - erf(0.2));
        assert!((r.value - expect).abs() < 1e-12, "{} vs {expect}", r.value);
        // and a two-sided union against the additive integral
        let region = IntervalSet::new(vec![(-1.5, -0.3), (0.2, 0.9)]).unwrap();
        let r = gap_probability(&basis, &GapGeometry::Explicit(region), &quad).unwrap();
        let expect = 1.0 - 0.5 * (erf(0.9) - erf(0.2)) - 0.5 * (erf(1.5) - erf(0.3));
        assert!((r.value - expect).abs() < 1e-12);
    }

    #[test]
    fn exterior_monotone_in_s() {
        let quad = QuadratureRule::legendre(90).unwrap();
        let basis = jacobi(3, 0.5, 0.5);
        let mut prev = -1.0;
        for i in 1..=12 {
            let s = i as f64 / 13.0;
            let v = gap_probability(&basis, &GapGeometry::JacobiExteriorSym { s }, &quad).unwrap().value;
            assert!(v >= prev);
            prev = v;
        }
        let basis = jacobi(3, 2.0, 1.0);
        let mut prev = 2.0;
        for i in 1..=12 {
            let s = i as f64 / 13.0;
            let v = gap_probability(&basis, &GapGeometry::InteriorSym { s }, &quad).unwrap().value;
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn support_edge_limits() {
        let quad = QuadratureRule::legendre(90).unwrap();
        for n in 1..=3usize {
            let basis = jacobi(n, 1.0, 1.0);
            let v = gap_probability(&basis, &GapGeometry::JacobiExteriorSym { s: 0.999_999 }, &quad).unwrap().value;
            assert!((v - 1.0).abs() < 1e-6, "n = {n}: {v}");
            let v = gap_probability(&basis, &GapGeometry::InteriorSym { s: 0.999_999 }, &quad).unwrap().value;
            assert!(v < 1e-6, "n = {n}: {v}");
        }
    }

    #[test]
    fn refinement_is_converged() {
        let quad = QuadratureRule::legendre(200).unwrap();
        let basis = jacobi(4, 0.5, 0.5);
        for &s in &[0.2, 0.6, 0.9] {
            let r = gap_probability(&basis, &GapGeometry::JacobiExteriorSym { s }, &quad).unwrap();
            assert!(r.est_error < 1e-11, "s = {s}: est_error = {}", r.est_error);
        }
    }

    #[test]
    fn quadrature_order_guard() {
        let basis = hermite(8);
        let quad = QuadratureRule::legendre(15).unwrap();
        assert!(matches!(
            gap_probability(&basis, &GapGeometry::ExteriorSym { s: 1.0 }, &quad),
            Err(Error::QuadratureTooCoarse { .. })
        ));
    }

    #[test]
    fn factorization_identity_small_cases() {
        let quad = QuadratureRule::legendre(140).unwrap();
        // N = 1 Hermite: the odd factor is an empty determinant.
        let f = factorization_check(1, &WeightSpec::Hermite, &GapGeometry::ExteriorSym { s: 0.9 }, &quad).unwrap();
        assert!(f.abs_diff < 1e-12, "N=1: {} vs {}", f.lhs, f.rhs);
        let f = factorization_check(2, &WeightSpec::Hermite, &GapGeometry::ExteriorSym { s: 0.8 }, &quad).unwrap();
        assert!(f.abs_diff < 1e-9, "N=2: {} vs {}", f.lhs, f.rhs);
        let f = factorization_check(
            3,
            &WeightSpec::Jacobi { alpha: 1.0, beta: 1.0 },
            &GapGeometry::JacobiExteriorSym { s: 0.5 },
            &quad,
        )
        .unwrap();
        assert!(f.abs_diff < 1e-9, "N=3 Jacobi: {} vs {}", f.lhs, f.rhs);
    }

    #[test]
    fn factorization_rejects_uneven_weight() {
        let quad = QuadratureRule::legendre(60).unwrap();
        let err = factorization_check(
            2,
            &WeightSpec::Jacobi { alpha: 2.0, beta: 1.0 },
            &GapGeometry::JacobiExteriorSym { s: 0.5 },
            &quad,
        );
        assert!(err.is_err());
    }

    #[test]
    fn gram_eigenvalues_within_unit_interval() {
        let quad = QuadratureRule::legendre(120).unwrap();
        let basis = jacobi(5, 0.5, 0.5);
        let inner = IntervalSet::new(vec![(-0.6, 0.6)]).unwrap();
        let g = gram_matrix(&basis, &inner, &quad).unwrap();
        assert!(g.max_asymmetry() < 1e-14);
        let vals = crate::linalg::symmetric_eigenvalues(g).unwrap();
        for v in vals {
            assert!(v > -1e-12 && v < 1.0 + 1e-12, "eigenvalue {v}");
        }
    }
}
