//! Eigenvalues of complex Hermitian matrices.
//!
//! The Hermitian matrix A + iB embeds into the real symmetric doubled
//! matrix [[A, -B], [B, A]], whose spectrum is that of the original with
//! every eigenvalue doubled; Householder tridiagonalization plus implicit
//! QL then finishes the job in real arithmetic.

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigenvalues, Mat};

/// Dense complex matrix in split storage.
#[derive(Debug, Clone)]
pub struct CMat {
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat { n, re: vec![0.0; n * n], im: vec![0.0; n * n] }
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    pub fn set(&mut self, i: usize, j: usize, re: f64, im: f64) {
        let k = self.idx(i, j);
        self.re[k] = re;
        self.im[k] = im;
    }

    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            worst = worst.max(self.im[self.idx(i, i)].abs());
            for j in 0..i {
                worst = worst.max((self.re[self.idx(i, j)] - self.re[self.idx(j, i)]).abs());
                worst = worst.max((self.im[self.idx(i, j)] + self.im[self.idx(j, i)]).abs());
            }
        }
        worst
    }

    /// Matrix scale for precondition tolerances.
    pub fn max_abs(&self) -> f64 {
        self.re.iter().chain(self.im.iter()).fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    let scale = m.max_abs().max(1.0);
    if m.hermitian_defect() > 1e-12 * scale {
        return Err(Error::precondition(
            "hermitian_eigenvalues",
            format!("matrix deviates from Hermitian by {}", m.hermitian_defect()),
        ));
    }
    let n = m.n;
    let mut doubled = Mat::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let k = m.idx(i, j);
            doubled[(i, j)] = m.re[k];
            doubled[(i + n, j + n)] = m.re[k];
            doubled[(i, j + n)] = -m.im[k];
            doubled[(i + n, j)] = m.im[k];
        }
    }
    let all = symmetric_eigenvalues(doubled)?;
    // Every eigenvalue appears twice; average the pairs.
    let vals = (0..n).map(|k| 0.5 * (all[2 * k] + all[2 * k + 1])).collect();
    Ok(vals)
}

/// Inverse-iteration residual ||M v - lambda v|| for one eigenvalue; used to
/// validate the solver, not by production paths.
pub fn eigen_residual(m: &CMat, lambda: f64) -> f64 {
    let n = m.n;
    // Shifted complex system solved by Gaussian elimination on the doubled
    // real form; a couple of iterations from a fixed start vector.
    let mut a = Mat::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let k = m.idx(i, j);
            a[(i, j)] = m.re[k];
            a[(i + n, j + n)] = m.re[k];
            a[(i, j + n)] = -m.im[k];
            a[(i + n, j)] = m.im[k];
        }
    }
    for i in 0..2 * n {
        a[(i, i)] -= lambda + 1e-11;
    }
    let mut v: Vec<f64> = (0..2 * n).map(|i| 1.0 / (1.0 + i as f64)).collect();
    for _ in 0..3 {
        v = solve_dense(&a, &v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
    }
    // Residual against the unshifted matrix.
    let mut worst = 0.0f64;
    let mut acc = vec![0.0; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let k = m.idx(i, j);
            acc[i] += m.re[k] * v[j] - m.im[k] * v[j + n];
            acc[i + n] += m.im[k] * v[j] + m.re[k] * v[j + n];
        }
    }
    for i in 0..2 * n {
        worst = worst.max((acc[i] - lambda * v[i]).abs());
    }
    worst
}

fn solve_dense(a: &Mat, b: &[f64]) -> Vec<f64> {
    let n = a.n;
    let mut lu = a.clone();
    let mut x = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut piv = k;
        for i in k + 1..n {
            if lu[(i, k)].abs() > lu[(piv, k)].abs() {
                piv = i;
            }
        }
        if piv != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = tmp;
            }
            perm.swap(k, piv);
            x.swap(k, piv);
        }
        let d = lu[(k, k)];
        if d == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let f = lu[(i, k)] / d;
            lu[(i, k)] = f;
            for j in k + 1..n {
                lu[(i, j)] -= f * lu[(k, j)];
            }
            x[i] -= f * x[k];
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let xj = x[j];
            x[i] -= lu[(i, j)] * xj;
        }
        if lu[(i, i)] != 0.0 {
            x[i] /= lu[(i, i)];
        }
    }
    x
}
