//! Small dense linear algebra: enough for affine maps on `R^d`, the direct
//! fixed-point oracle and spectral-norm estimates.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::sampling;

/// Pivots smaller than this in magnitude mark `I - A` as singular.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

/// Dense square matrix, stored as rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.rows()
    }
}

impl Matrix {
    /// Builds a square matrix, rejecting ragged or non-finite input.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidArgument("matrix must have at least one row".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            check_dim(n, row.len())?;
            if let Some(&bad) = row.iter().find(|x| !x.is_finite()) {
                return Err(Error::Domain {
                    what: "matrix entry",
                    value: bad,
                    expected: "finite reals",
                });
            }
            data.extend(row);
        }
        Ok(Matrix { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn transpose_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, row) in self.data.chunks(self.n).enumerate() {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * x[i];
            }
        }
        out
    }

    /// `D A D^{-1}` for `D = diag(d)`.
    pub fn similarity_diag(&self, d: &[f64]) -> Matrix {
        let n = self.n;
        let mut m = self.clone();
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] *= d[i] / d[j];
            }
        }
        m
    }
}

/// Solves `(I - A) x = b` by Gaussian elimination with partial pivoting.
pub fn solve_fixed_point(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.dim();
    check_dim(n, b.len())?;
    // augmented rows of [I - A | b]
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n)
                .map(|j| if i == j { 1.0 } else { 0.0 } - a.get(i, j))
                .collect();
            row.push(b[i]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| m[r][col].abs().total_cmp(&m[s][col].abs()))
            .expect("nonempty range");
        let pivot = m[pivot_row][col];
        if pivot.abs() < PIVOT_THRESHOLD {
            return Err(Error::Singular { pivot: pivot.abs() });
        }
        m.swap(col, pivot_row);
        let (upper, lower) = m.split_at_mut(col + 1);
        let top = &upper[col];
        for row in lower.iter_mut() {
            let factor = row[col] / pivot;
            if factor != 0.0 {
                for (x, &p) in row[col..].iter_mut().zip(&top[col..]) {
                    *x -= factor * p;
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let tail: f64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - tail) / m[i][i];
    }
    Ok(x)
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Largest singular value `||M||_2` by power iteration on `M^T M`, stopped
/// when successive estimates agree to `rel_tol`.
///
/// Several deterministic starting vectors are tried and the largest estimate
/// kept, so a start orthogonal to the dominant singular vector cannot hide it.
pub fn spectral_norm(m: &Matrix, rel_tol: f64, max_iter: usize) -> f64 {
    let n = m.dim();
    let mut starts: Vec<Vec<f64>> = vec![(0..n).map(|i| 1.0 + 0.1 * i as f64).collect()];
    starts.extend((0..n).map(|k| (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect()));
    let mut best = 0.0f64;
    for mut x in starts {
        let nx = norm2(&x);
        x.iter_mut().for_each(|v| *v /= nx);
        let mut estimate = 0.0;
        for _ in 0..max_iter {
            let y = m.transpose_mul_vec(&m.mul_vec(&x));
            let ny = norm2(&y);
            if ny == 0.0 {
                estimate = 0.0;
                break;
            }
            // x has unit length, so ||M^T M x|| approaches sigma_max^2
            let next = ny;
            x = y.into_iter().map(|v| v / ny).collect();
            let done = (next - estimate).abs() <= rel_tol * next;
            estimate = next;
            if done {
                break;
            }
        }
        best = best.max(estimate.sqrt());
    }
    best
}

/// Random symmetric `n x n` matrix with eigenvalues in `[-radius, radius]`,
/// the first equal to `radius`, so spectral radius and 2-norm are both
/// `radius`. Built as `Q diag(lambda) Q^T` with `Q` from Gram-Schmidt on a
/// seeded Gaussian-ish matrix.
pub fn random_symmetric_contraction(n: usize, radius: f64, seed: u64) -> Matrix {
    let mut rng = sampling::rng(seed);
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    while q.len() < n {
        let mut v = sampling::vector(&mut rng, n, 1.0);
        for u in &q {
            let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
        }
        let nv = norm2(&v);
        if nv > 1e-6 {
            q.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    let lambda: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                radius
            } else {
                rng.gen_range(-radius..=radius)
            }
        })
        .collect();
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.data[i * n + j] = (0..n).map(|k| q[k][i] * lambda[k] * q[k][j]).sum();
        }
    }
    m
}
