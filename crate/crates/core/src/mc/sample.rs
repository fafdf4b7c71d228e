//! Sampling the matrix models: Gaussian Hermitian matrices for the Hermite
//! weight, and the two-Wishart quotient A (A + B)^{-1} for integer-parameter
//! Jacobi weights.

use super::eigen::{hermitian_eigenvalues, CMat};
use super::rng::SplitMix64;
use super::SpectrumSample;
use crate::error::{Error, Result};
use crate::orthopoly::WeightSpec;

const INV_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Hermitian draw: diagonal N(0, 1/sqrt(2)), off-diagonal
/// N(0, 1/2) + i N(0, 1/2), giving eigenvalue weight exp(-x^2).
pub fn sample_gue_with(n: usize, rng: &mut SplitMix64) -> Result<SpectrumSample> {
    let mut m = CMat::zeros(n);
    for i in 0..n {
        m.set(i, i, rng.next_normal() * INV_SQRT_2, 0.0);
        for j in i + 1..n {
            let re = 0.5 * rng.next_normal();
            let im = 0.5 * rng.next_normal();
            m.set(i, j, re, im);
            m.set(j, i, re, -im);
        }
    }
    let eigenvalues = hermitian_eigenvalues(&m)?;
    Ok(SpectrumSample { eigenvalues, weight: WeightSpec::Hermite, n })
}

pub fn sample_gue(n: usize, seed: u64) -> Result<SpectrumSample> {
    if n == 0 {
        return Err(Error::precondition("sample_gue", "N must be positive"));
    }
    sample_gue_with(n, &mut SplitMix64::derived(seed, 0))
}

/// Complex Wishart factor: G^dagger G with G an (m x n) matrix of
/// N(0, 1/sqrt(2)) + i N(0, 1/sqrt(2)) entries.
fn wishart(m_rows: usize, n: usize, rng: &mut SplitMix64) -> CMat {
    let mut g_re = vec![0.0; m_rows * n];
    let mut g_im = vec![0.0; m_rows * n];
    for v in g_re.iter_mut() {
        *v = rng.next_normal() * INV_SQRT_2;
    }
    for v in g_im.iter_mut() {
        *v = rng.next_normal() * INV_SQRT_2;
    }
    let mut out = CMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut re = 0.0;
            let mut im = 0.0;
            for r in 0..m_rows {
                let (ar, ai) = (g_re[r * n + i], -g_im[r * n + i]);
                let (br, bi) = (g_re[r * n + j], g_im[r * n + j]);
                re += ar * br - ai * bi;
                im += ar * bi + ai * br;
            }
            out.set(i, j, re, im);
        }
    }
    out
}

/// Complex Cholesky factorization S = L L^dagger (S positive definite).
fn cholesky(s: &CMat) -> Result<CMat> {
    let n = s.n;
    let mut l = CMat::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let mut re = s.re[s.idx(i, j)];
            let mut im = s.im[s.idx(i, j)];
            for k in 0..j {
                let (ar, ai) = (l.re[l.idx(i, k)], l.im[l.idx(i, k)]);
                let (br, bi) = (l.re[l.idx(j, k)], -l.im[l.idx(j, k)]);
                re -= ar * br - ai * bi;
                im -= ar * bi + ai * br;
            }
            if i == j {
                if re <= 0.0 {
                    return Err(Error::precondition("cholesky", format!("pivot {re} not positive")));
                }
                l.set(i, i, re.sqrt(), 0.0);
            } else {
                let d = l.re[l.idx(j, j)];
                l.set(i, j, re / d, im / d);
            }
        }
    }
    Ok(l)
}

/// Two-Wishart quotient spectrum mapped onto the symmetric Jacobi interval:
/// lambda of A (A+B)^{-1} in (0, 1) becomes x = 1 - 2 lambda in (-1, 1),
/// with weight (1-x)^{M1-N} (1+x)^{M2-N}.
pub fn sample_jue_with(n: usize, m1: usize, m2: usize, rng: &mut SplitMix64) -> Result<SpectrumSample> {
    if m1 < n || m2 < n || n == 0 {
        return Err(Error::precondition("sample_jue", format!("need M1, M2 >= N >= 1, got ({m1}, {m2}, {n})")));
    }
    let a = wishart(m1, n, rng);
    let b = wishart(m2, n, rng);
    let mut apb = CMat::zeros(n);
    for k in 0..n * n {
        apb.re[k] = a.re[k] + b.re[k];
        apb.im[k] = a.im[k] + b.im[k];
    }
    // Eigenvalues of A(A+B)^{-1} equal those of C^{-1} A C^{-dagger} with
    // A + B = C C^dagger, which is Hermitian with spectrum in (0, 1).
    let l = cholesky(&apb)?;
    // First L^{-1} A, then (L^{-1} A) L^{-dagger} via the conjugate solve on
    // the right: M = L^{-1} A (L^{-1})^dagger.
    let half = forward_solve(&l, &a);
    let m = forward_solve_right(&l, &half);
    let lambdas = hermitian_eigenvalues(&m)?;
    let mut xs: Vec<f64> = lambdas.into_iter().map(|lam| 1.0 - 2.0 * lam).collect();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    Ok(SpectrumSample {
        eigenvalues: xs,
        weight: WeightSpec::Jacobi { alpha: (m1 - n) as f64, beta: (m2 - n) as f64 },
        n,
    })
}

/// X = L^{-1} B.
fn forward_solve(l: &CMat, b: &CMat) -> CMat {
    let n = l.n;
    let mut x = b.clone();
    for col in 0..n {
        for i in 0..n {
            let mut re = x.re[x.idx(i, col)];
            let mut im = x.im[x.idx(i, col)];
            for k in 0..i {
                let (ar, ai) = (l.re[l.idx(i, k)], l.im[l.idx(i, k)]);
                let (xr, xi) = (x.re[x.idx(k, col)], x.im[x.idx(k, col)]);
                re -= ar * xr - ai * xi;
                im -= ar * xi + ai * xr;
            }
            let d = l.re[l.idx(i, i)];
            x.set(i, col, re / d, im / d);
        }
    }
    x
}

/// X = B (L^dagger)^{-1}, i.e. solve X L^dagger = B by columns of L.
fn forward_solve_right(l: &CMat, b: &CMat) -> CMat {
    let n = l.n;
    let mut x = b.clone();
    for row in 0..n {
        for j in 0..n {
            let mut re = x.re[x.idx(row, j)];
            let mut im = x.im[x.idx(row, j)];
            for k in 0..j {
                // (L^dagger)_{kj} = conj(L_{jk})
                let (ar, ai) = (l.re[l.idx(j, k)], -l.im[l.idx(j, k)]);
                let (xr, xi) = (x.re[x.idx(row, k)], x.im[x.idx(row, k)]);
                re -= xr * ar - xi * ai;
                im -= xr * ai + xi * ar;
            }
            let d = l.re[l.idx(j, j)];
            x.set(row, j, re / d, im / d);
        }
    }
    x
}

pub fn sample_jue(n: usize, m1: usize, m2: usize, seed: u64) -> Result<SpectrumSample> {
    sample_jue_with(n, m1, m2, &mut SplitMix64::derived(seed, 0))
}
