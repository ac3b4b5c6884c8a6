//! Dense complex matrices for test oracles, diagnostics and the HSS baselines.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default upper bound on `n` for dense materialization.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Relative pivot threshold for [`LuFactor`].
pub const PIVOT_TOL: f64 = 1e-14;

pub fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::DenseCapExceeded { n, cap });
    }
    Ok(())
}

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        DenseMatrix { n, data }
    }

    pub fn from_diagonal(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        let n = self.n;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(C64, C64) -> C64) -> DenseMatrix {
        DenseMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    pub fn scale(&self, s: C64) -> DenseMatrix {
        DenseMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// `σI + self`
    pub fn shifted(&self, sigma: C64) -> DenseMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] += sigma;
        }
        m
    }

    pub fn adjoint(&self) -> DenseMatrix {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    /// Hermitian part `(M + M^H)/2` and skew-Hermitian part `(M − M^H)/2`.
    pub fn hermitian_split(&self) -> (DenseMatrix, DenseMatrix) {
        let adj = self.adjoint();
        (
            self.add(&adj).scale(C64::new(0.5, 0.0)),
            self.sub(&adj).scale(C64::new(0.5, 0.0)),
        )
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn lu(&self) -> Result<LuFactor> {
        LuFactor::new(self)
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: b.len(),
            });
        }
        Ok(self.lu()?.solve(b))
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        let lu = self.lu()?;
        let n = self.n;
        let mut inv = DenseMatrix::zeros(n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            e[j] = C64::new(1.0, 0.0);
            let col = lu.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }

    pub fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }

    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        if self.n == 0 {
            return Ok(Vec::new());
        }
        self.to_nalgebra()
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .ok_or(Error::EigenFailure)
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .iter()
            .map(|l| l.norm())
            .fold(0.0, f64::max))
    }

    /// Spectral norm, the largest singular value.
    pub fn norm2(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.to_nalgebra()
            .singular_values()
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// Dense circulant matrix with first column `c`: `C[i][j] = c[(i − j) mod n]`.
pub fn dense_circulant(c: &[C64]) -> DenseMatrix {
    let n = c.len();
    DenseMatrix::from_fn(n, |i, j| c[(i + n - j) % n])
}

/// Dense skew-circulant matrix with first column `s`; wrapped entries change sign.
pub fn dense_skew_circulant(s: &[C64]) -> DenseMatrix {
    let n = s.len();
    DenseMatrix::from_fn(n, |i, j| if i >= j { s[i - j] } else { -s[n + i - j] })
}

/// LU factorization with partial pivoting, `P M = L U`.
#[derive(Clone, Debug)]
pub struct LuFactor {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
}

impl LuFactor {
    pub fn new(m: &DenseMatrix) -> Result<Self> {
        let n = m.n;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= PIVOT_TOL * scale {
                return Err(Error::Singular(pmax));
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            let (upper, lower) = lu.split_at_mut((k + 1) * n);
            let krow = &upper[k * n..(k + 1) * n];
            for i in 0..(n - k - 1) {
                let row = &mut lower[i * n..(i + 1) * n];
                let f = row[k] / pivot;
                row[k] = f;
                if f == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in (k + 1)..n {
                    row[j] -= f * krow[j];
                }
            }
        }
        Ok(LuFactor { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_in_place(&self, x: &mut [C64]) {
        let n = self.n;
        let mut y: Vec<C64> = self.perm.iter().map(|&p| x[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..(i + 1) * n];
            let mut s = y[i];
            for j in 0..i {
                s -= row[j] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n..(i + 1) * n];
            let mut s = y[i];
            for j in (i + 1)..n {
                s -= row[j] * y[j];
            }
            y[i] = s / row[i];
        }
        x.copy_from_slice(&y);
    }
}
