//! Small dense linear algebra kernels shared by the quadrature builder, the
//! Gram-determinant route, and the Monte Carlo eigensolver.

use crate::error::{Error, Result};

/// Dense row-major square matrix.
#[derive(Debug, Clone)]
pub struct Mat {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Determinant in log space: `value = sign * exp(ln_abs)`.
#[derive(Debug, Clone, Copy)]
pub struct LogDet {
    pub sign: f64,
    pub ln_abs: f64,
}

impl LogDet {
    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}

/// Determinant by LU with partial pivoting, pivots accumulated in log space
/// so that strongly contracting matrices (det far below f64 underflow in
/// linear space) stay representable.
pub fn log_det_lu(mut a: Mat) -> LogDet {
    let n = a.n;
    let mut sign = 1.0f64;
    let mut ln_abs = 0.0f64;
    for k in 0..n {
        let mut piv = k;
        let mut best = a[(k, k)].abs();
        for i in k + 1..n {
            let v = a[(i, k)].abs();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return LogDet { sign: 0.0, ln_abs: f64::NEG_INFINITY };
        }
        if piv != k {
            for j in 0..n {
                a.data.swap(k * n + j, piv * n + j);
            }
            sign = -sign;
        }
        let d = a[(k, k)];
        sign *= d.signum();
        ln_abs += d.abs().ln();
        for i in k + 1..n {
            let f = a[(i, k)] / d;
            if f != 0.0 {
                for j in k + 1..n {
                    a[(i, j)] -= f * a[(k, j)];
                }
            }
        }
    }
    LogDet { sign, ln_abs }
}

fn hypot(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// Implicitly shifted QL on a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal and `e[i]` couples rows `i` and `i+1`, with
/// `e[n-1]` used as a zero sentinel. When `first_row` is `Some`, the
/// accumulated rotations are applied to that row vector, which yields the
/// first component of every eigenvector when seeded with the first unit
/// vector.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut first_row: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    // Deflation is judged against the running matrix scale rather than the
    // local diagonal, which may be exactly zero (symmetric-weight rules).
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                if e[m].abs() <= eps * tst1 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::non_convergence("ql_implicit", format!("row {l} after 60 sweeps")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Deflate without finishing the sweep.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = first_row.as_deref_mut() {
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues (ascending) of a symmetric tridiagonal matrix.
pub fn symtrid_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

/// Eigenvalues plus first components of the orthonormal eigenvectors,
/// sorted by ascending eigenvalue. This is exactly what Golub-Welsch needs.
pub fn symtrid_eigen_first(diag: &[f64], offdiag: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n];
    if n > 0 {
        z[0] = 1.0;
    }
    ql_implicit(&mut d, &mut e, Some(&mut z))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let vals = idx.iter().map(|&i| d[i]).collect();
    let firsts = idx.iter().map(|&i| z[i]).collect();
    Ok((vals, firsts))
}

/// Householder reduction of a real symmetric matrix to tridiagonal form
/// (eigenvalues only; no transformation accumulation).
pub fn tridiagonalize_symmetric(a: &mut Mat) -> (Vec<f64>, Vec<f64>) {
    let n = a.n;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[(i, k)].abs();
            }
            if scale == 0.0 {
                e[i] = a[(i, l)];
            } else {
                for k in 0..=l {
                    let v = a[(i, k)] / scale;
                    a[(i, k)] = v;
                    h += v * v;
                }
                let f = a[(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[(i, l)] = f - g;
                let mut ff = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[(j, k)] * a[(i, k)];
                    }
                    for k in j + 1..=l {
                        g += a[(k, j)] * a[(i, k)];
                    }
                    e[j] = g / h;
                    ff += e[j] * a[(i, j)];
                }
                let hh = ff / (2.0 * h);
                for j in 0..=l {
                    let f = a[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let delta = f * e[k] + g * a[(i, k)];
                        a[(j, k)] -= delta;
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[(i, i)];
    }
    (d, e)
}

/// Eigenvalues (ascending) of a real symmetric matrix via Householder
/// tridiagonalization followed by implicit QL.
pub fn symmetric_eigenvalues(mut a: Mat) -> Result<Vec<f64>> {
    let n = a.n;
    let (d, e) = tridiagonalize_symmetric(&mut a);
    // Repack: e[i] couples i and i+1.
    let mut off = vec![0.0; n.saturating_sub(1)];
    if n > 1 {
        off.copy_from_slice(&e[1..n]);
    }
    symtrid_eigenvalues(&d, &off)
}
