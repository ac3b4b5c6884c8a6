//! The two benchmark families: a banded complex Toeplitz matrix and the
//! shifted-Grünwald discretization of a space-fractional diffusion operator.

use num_complex::Complex64 as C64;

use crate::ave::AveProblem;
use crate::error::{Error, Result};
use crate::toeplitz::ToeplitzMatrix;

/// Banded matrix with `γ` on the diagonal, `−1 − cι`, `−1 − dι` on the first two
/// subdiagonals and `cι`, `dι` on the first two superdiagonals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Example1Params {
    pub n: usize,
    pub gamma: f64,
    pub c: f64,
    pub d: f64,
}

pub fn example1(p: &Example1Params) -> Result<ToeplitzMatrix> {
    if p.n < 3 {
        return Err(Error::InvalidParameter(format!(
            "banded family needs n >= 3, got {}",
            p.n
        )));
    }
    if !(p.gamma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must be positive, got {}",
            p.gamma
        )));
    }
    let zero = C64::new(0.0, 0.0);
    let mut col = vec![zero; p.n];
    let mut row = vec![zero; p.n];
    col[0] = C64::new(p.gamma, 0.0);
    row[0] = col[0];
    col[1] = C64::new(-1.0, -p.c);
    col[2] = C64::new(-1.0, -p.d);
    row[1] = C64::new(0.0, p.c);
    row[2] = C64::new(0.0, p.d);
    ToeplitzMatrix::new(col, row)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Example2Params {
    pub n: usize,
    pub alpha: f64,
    pub d_plus: f64,
    pub d_minus: f64,
    pub tau: f64,
    pub h: f64,
}

impl Example2Params {
    /// Benchmark setting `h = τ = 1/(n + 1)`.
    pub fn benchmark(n: usize, alpha: f64, d_plus: f64, d_minus: f64) -> Self {
        let h = 1.0 / (n as f64 + 1.0);
        Example2Params {
            n,
            alpha,
            d_plus,
            d_minus,
            tau: h,
            h,
        }
    }

    fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.n == 0 {
            return Err(Error::Empty);
        }
        if !(self.d_plus >= 0.0 && self.d_minus >= 0.0) {
            return Err(Error::InvalidParameter(
                "diffusion coefficients must be nonnegative".into(),
            ));
        }
        if !(self.tau > 0.0 && self.h > 0.0) {
            return Err(Error::InvalidParameter("tau and h must be positive".into()));
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "fractional order must lie in (1, 2), got {alpha}"
        )))
    }
}

/// `g_0, …, g_K` with `g_0 = 1`, `g_k = (1 − (α + 1)/k) g_{k−1}`.
pub fn grunwald_coeffs(alpha: f64, k_max: usize) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let mut g = Vec::with_capacity(k_max + 1);
    g.push(1.0);
    for k in 1..=k_max {
        let prev = g[k - 1];
        g.push((1.0 - (alpha + 1.0) / k as f64) * prev);
    }
    Ok(g)
}

/// `A = I − (τ/h^α)(d₊ G + d₋ Gᵀ)` where `G[i][j] = g_{i−j+1}` (zero when `i − j + 1 < 0`).
pub fn fractional_matrix(p: &Example2Params) -> Result<ToeplitzMatrix> {
    p.validate()?;
    let n = p.n;
    let g = grunwald_coeffs(p.alpha, n)?;
    let nu = p.tau / p.h.powf(p.alpha);
    // G: first column g_1..g_n, first row g_1, g_0, 0, …
    let g_col = |k: usize| g[k + 1];
    let g_row = |k: usize| match k {
        0 => g[1],
        1 => g[0],
        _ => 0.0,
    };
    let col: Vec<f64> = (0..n)
        .map(|k| f64::from(k == 0) - nu * (p.d_plus * g_col(k) + p.d_minus * g_row(k)))
        .collect();
    let row: Vec<f64> = (0..n)
        .map(|k| f64::from(k == 0) - nu * (p.d_plus * g_row(k) + p.d_minus * g_col(k)))
        .collect();
    let a = ToeplitzMatrix::from_real(&col, &row)?;
    let (c, s) = a.cscs_spectra()?;
    if c.min_real_part() <= 0.0 || s.min_real_part() <= 0.0 {
        log::warn!(
            "circulant or skew-circulant part not positive definite (min real parts {:e}, {:e})",
            c.min_real_part(),
            s.min_real_part()
        );
    }
    Ok(a)
}

/// `x_k = (−1)^k ι`, `k = 1, …, n`.
pub fn exact_solution(n: usize) -> Vec<C64> {
    (1..=n)
        .map(|k| C64::new(0.0, if k % 2 == 0 { 1.0 } else { -1.0 }))
        .collect()
}

/// `scale · (A x* − |x*|)`.
pub fn rhs_from_solution(a: &ToeplitzMatrix, x_star: &[C64], scale: f64) -> Result<Vec<C64>> {
    if !(scale > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scale must be positive, got {scale}"
        )));
    }
    let ax = a.matvec(x_star)?;
    Ok(ax
        .iter()
        .zip(x_star)
        .map(|(v, x)| scale * (v - x.norm()))
        .collect())
}

/// Banded problem whose solution is [`exact_solution`].
pub fn example1_problem(p: &Example1Params) -> Result<AveProblem> {
    let a = example1(p)?;
    let xs = exact_solution(p.n);
    let b = rhs_from_solution(&a, &xs, 1.0)?;
    AveProblem::new(a, b, Some(xs))
}

/// Fractional problem with right-hand side `h^α (A x* − |x*|)`. The scaled problem
/// no longer has `x*` as its solution, so none is recorded.
pub fn example2_problem(p: &Example2Params) -> Result<AveProblem> {
    let a = fractional_matrix(p)?;
    let xs = exact_solution(p.n);
    let b = rhs_from_solution(&a, &xs, p.h.powf(p.alpha))?;
    AveProblem::new(a, b, None)
}
