//! Non-Hermitian Toeplitz matrices stored by their first column and first row.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64 as C64;

use crate::dense::{check_cap, DenseMatrix, DEFAULT_DENSE_CAP};
use crate::error::{Error, Result};
use crate::spectrum::{CirculantSpectrum, Dft, SkewCirculantSpectrum};

/// Allowed disagreement between `first_col[0]` and `first_row[0]`.
pub const CORNER_TOL: f64 = 1e-14;

/// Spectrum of the 2n × 2n circulant that embeds the matrix.
#[derive(Debug)]
struct Embedding {
    dft: Dft,
    lambdas: Vec<C64>,
}

/// `A[i][j] = a_{i−j}`; `first_col` holds `a_0 … a_{n−1}`, `first_row` holds `a_0, a_{−1} … a_{1−n}`.
#[derive(Clone, Debug)]
pub struct ToeplitzMatrix {
    first_col: Vec<C64>,
    first_row: Vec<C64>,
    embedding: OnceLock<Arc<Embedding>>,
}

impl PartialEq for ToeplitzMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.first_col == other.first_col && self.first_row == other.first_row
    }
}

impl ToeplitzMatrix {
    pub fn new(first_col: Vec<C64>, first_row: Vec<C64>) -> Result<Self> {
        if first_col.is_empty() {
            return Err(Error::Empty);
        }
        if first_col.len() != first_row.len() {
            return Err(Error::DimensionMismatch {
                expected: first_col.len(),
                found: first_row.len(),
            });
        }
        for (i, v) in first_col.iter().chain(&first_row).enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite(i % first_col.len()));
            }
        }
        if (first_col[0] - first_row[0]).norm() > CORNER_TOL {
            return Err(Error::CornerMismatch {
                col: first_col[0].to_string(),
                row: first_row[0].to_string(),
            });
        }
        let mut first_row = first_row;
        first_row[0] = first_col[0];
        Ok(ToeplitzMatrix {
            first_col,
            first_row,
            embedding: OnceLock::new(),
        })
    }

    /// Real-valued constructor.
    pub fn from_real(first_col: &[f64], first_row: &[f64]) -> Result<Self> {
        Self::new(
            first_col.iter().map(|&v| C64::new(v, 0.0)).collect(),
            first_row.iter().map(|&v| C64::new(v, 0.0)).collect(),
        )
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut e = vec![C64::new(0.0, 0.0); n];
        if let Some(v) = e.first_mut() {
            *v = C64::new(1.0, 0.0);
        }
        Self::new(e.clone(), e)
    }

    pub fn dim(&self) -> usize {
        self.first_col.len()
    }

    pub fn first_col(&self) -> &[C64] {
        &self.first_col
    }

    pub fn first_row(&self) -> &[C64] {
        &self.first_row
    }

    /// Entry `a_k` for `k ∈ (−n, n)`.
    pub fn diag_entry(&self, k: isize) -> C64 {
        if k >= 0 {
            self.first_col[k as usize]
        } else {
            self.first_row[(-k) as usize]
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        ToeplitzMatrix::new(
            self.first_col.iter().map(|v| v * s).collect(),
            self.first_row.iter().map(|v| v * s).collect(),
        )
        .expect("scaling preserves validity")
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        self.to_dense_capped(DEFAULT_DENSE_CAP)
    }

    pub fn to_dense_capped(&self, cap: usize) -> Result<DenseMatrix> {
        check_cap(self.dim(), cap)?;
        Ok(DenseMatrix::from_fn(self.dim(), |i, j| {
            if i >= j {
                self.first_col[i - j]
            } else {
                self.first_row[j - i]
            }
        }))
    }

    fn embedding(&self) -> &Embedding {
        self.embedding.get_or_init(|| {
            let n = self.dim();
            let dft = Dft::new(2 * n);
            // [a_0 … a_{n−1}, 0, a_{1−n} … a_{−1}]
            let mut lambdas = Vec::with_capacity(2 * n);
            lambdas.extend_from_slice(&self.first_col);
            lambdas.push(C64::new(0.0, 0.0));
            lambdas.extend(self.first_row[1..].iter().rev());
            dft.forward(&mut lambdas);
            Arc::new(Embedding { dft, lambdas })
        })
    }

    /// `y = A x` through the circulant embedding, O(n log n).
    pub fn matvec(&self, x: &[C64]) -> Result<Vec<C64>> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        let emb = self.embedding();
        let mut buf = vec![C64::new(0.0, 0.0); 2 * n];
        buf[..n].copy_from_slice(x);
        emb.dft.forward(&mut buf);
        for (v, l) in buf.iter_mut().zip(&emb.lambdas) {
            *v *= l;
        }
        emb.dft.inverse(&mut buf);
        buf.truncate(n);
        Ok(buf)
    }

    /// First columns `(c, s)` of the circulant and skew-circulant parts, `A = C + S`.
    pub fn cscs_split(&self) -> (Vec<C64>, Vec<C64>) {
        let n = self.dim();
        let mut c = Vec::with_capacity(n);
        let mut s = Vec::with_capacity(n);
        c.push(self.first_col[0] * 0.5);
        s.push(self.first_col[0] * 0.5);
        for k in 1..n {
            let ak = self.first_col[k];
            let akn = self.first_row[n - k];
            c.push((ak + akn) * 0.5);
            s.push((ak - akn) * 0.5);
        }
        (c, s)
    }

    pub fn cscs_spectra(&self) -> Result<(CirculantSpectrum, SkewCirculantSpectrum)> {
        let (c, s) = self.cscs_split();
        Ok((
            CirculantSpectrum::from_first_column(&c)?,
            SkewCirculantSpectrum::from_first_column(&s)?,
        ))
    }

    /// Hermitian part `(A + A^H)/2`, itself Toeplitz.
    pub fn hermitian_part(&self) -> ToeplitzMatrix {
        let col: Vec<C64> = self
            .first_col
            .iter()
            .zip(&self.first_row)
            .map(|(a, b)| (a + b.conj()) * 0.5)
            .collect();
        let row: Vec<C64> = col.iter().map(|v| v.conj()).collect();
        ToeplitzMatrix::new(col, row).expect("hermitian part keeps shape")
    }

    /// Skew-Hermitian part `(A − A^H)/2`.
    pub fn skew_hermitian_part(&self) -> ToeplitzMatrix {
        let col: Vec<C64> = self
            .first_col
            .iter()
            .zip(&self.first_row)
            .map(|(a, b)| (a - b.conj()) * 0.5)
            .collect();
        let row: Vec<C64> = col.iter().map(|v| -v.conj()).collect();
        ToeplitzMatrix::new(col, row).expect("skew-hermitian part keeps shape")
    }
}
