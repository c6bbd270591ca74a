//! Dense real matrices sized for embedding computations: LU with partial
//! pivoting (log-space determinant) and power iteration for the extreme
//! singular values.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub n: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat { n, data: vec![0.0; n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            data.extend(r);
        }
        Mat { n, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn matvec(&self, v: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            out[i] = self.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }

    pub fn matvec_transposed(&self, v: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for i in 0..self.n {
            let vi = v[i];
            for (j, o) in out.iter_mut().enumerate() {
                *o += self.get(i, j) * vi;
            }
        }
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }
}

/// LU factorization with partial pivoting. Determinant magnitude is
/// accumulated in log space so degree-scale dynamic range survives.
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    pub log_abs_det: f64,
}

impl Lu {
    pub fn factor(m: &Mat) -> Result<Lu> {
        let n = m.n;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut log_abs_det = 0.0f64;
        for col in 0..n {
            let (pivot_row, pivot_val) = (col..n)
                .map(|r| (r, lu[r * n + col].abs()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pivot_val == 0.0 || !pivot_val.is_finite() {
                return Err(Error::Numeric(format!(
                    "singular or non-finite matrix at column {col}"
                )));
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
            }
            let diag = lu[col * n + col];
            log_abs_det += diag.abs().ln();
            for r in col + 1..n {
                let factor = lu[r * n + col] / diag;
                lu[r * n + col] = factor;
                for j in col + 1..n {
                    lu[r * n + j] -= factor * lu[col * n + j];
                }
            }
        }
        Ok(Lu { n, lu, perm, log_abs_det })
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64], x: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            x[i] = b[self.perm[i]];
        }
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
    }

    /// Solve `A^T x = b`.
    pub fn solve_transposed(&self, b: &[f64], x: &mut [f64]) {
        let n = self.n;
        let mut y = b.to_vec();
        // A = P^T L U  =>  A^T = U^T L^T P; solve U^T z = b, L^T w = z, x = P^T w
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[j * n + i] * y[j];
            }
            y[i] = s / self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[j * n + i] * y[j];
            }
            y[i] = s;
        }
        for i in 0..n {
            x[self.perm[i]] = y[i];
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = norm2(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Largest singular value by power iteration on `M^T M`, with three
/// restarts from independent random starts that must agree.
pub fn sigma_max(m: &Mat, tol: f64, seeds: &[u64]) -> Result<f64> {
    let mut results = Vec::new();
    for &seed in seeds {
        results.push(sigma_max_once(m, tol, seed)?);
    }
    let (lo, hi) = results
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi > 0.0 && (hi - lo) / hi > 1e-9 {
        return Err(Error::Numeric(format!(
            "power iteration restarts disagree: {lo} vs {hi}"
        )));
    }
    Ok(hi)
}

fn sigma_max_once(m: &Mat, tol: f64, seed: u64) -> Result<f64> {
    let n = m.n;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    normalize(&mut v);
    let mut tmp = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut prev = 0.0f64;
    for _ in 0..10_000 {
        m.matvec(&v, &mut tmp);
        let sigma = norm2(&tmp);
        m.matvec_transposed(&tmp, &mut w);
        v.copy_from_slice(&w);
        if normalize(&mut v) == 0.0 {
            return Ok(0.0);
        }
        if (sigma - prev).abs() <= tol * sigma.max(1e-300) {
            return Ok(sigma);
        }
        prev = sigma;
    }
    Err(Error::Numeric("power iteration failed to converge".into()))
}

/// Smallest singular value by inverse iteration through the LU factors.
pub fn sigma_min(m: &Mat, lu: &Lu, tol: f64, seeds: &[u64]) -> Result<f64> {
    let mut results = Vec::new();
    for &seed in seeds {
        results.push(sigma_min_once(m, lu, tol, seed)?);
    }
    let (lo, hi) = results
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi > 0.0 && (hi - lo) / hi > 1e-9 {
        return Err(Error::Numeric(format!(
            "inverse iteration restarts disagree: {lo} vs {hi}"
        )));
    }
    Ok(lo)
}

fn sigma_min_once(m: &Mat, lu: &Lu, tol: f64, seed: u64) -> Result<f64> {
    let n = m.n;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    normalize(&mut v);
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut prev = f64::INFINITY;
    for _ in 0..10_000 {
        // (M^T M)^{-1} v  =  M^{-1} (M^{-T} v)
        lu.solve_transposed(&v, &mut y);
        lu.solve(&y, &mut z);
        let growth = norm2(&z);
        if growth == 0.0 || !growth.is_finite() {
            return Err(Error::Numeric("inverse iteration degenerated".into()));
        }
        // growth converges to 1/sigma_min^2
        let sigma = 1.0 / growth.sqrt();
        v.copy_from_slice(&z);
        normalize(&mut v);
        if (sigma - prev).abs() <= tol * sigma.max(1e-300) {
            return Ok(sigma);
        }
        prev = sigma;
    }
    Err(Error::Numeric("inverse iteration failed to converge".into()))
}
