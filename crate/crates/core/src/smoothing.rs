//! Smoothing approximation of `|x|` and the local-convergence quantities of the
//! nonlinear CSCS-like iteration, evaluated numerically.
//!
//! `φ(x) = μ ln(e^{x/μ} + e^{−x/μ})` is evaluated as `|x| + μ ln(1 + e^{−2|x|/μ})`,
//! which never overflows. Its Jacobian is `diag(tanh(x_j/μ))`. Both are defined on
//! real vectors; for complex iterates they are applied to the modulus vector.

use std::f64::consts::LN_2;

use num_complex::Complex64 as C64;

use crate::dense::{
    check_cap, dense_circulant, dense_skew_circulant, DenseMatrix, DEFAULT_DENSE_CAP,
};
use crate::error::{Error, Result};
use crate::linear::AlternatingSplitting;
use crate::toeplitz::ToeplitzMatrix;
use crate::vecops::norm2_real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothingParams {
    mu: f64,
}

impl SmoothingParams {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "smoothing parameter must be positive, got {mu}"
            )));
        }
        Ok(SmoothingParams { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

#[inline]
fn phi_scalar(x: f64, mu: f64) -> f64 {
    let ax = x.abs();
    ax + mu * (-2.0 * ax / mu).exp().ln_1p()
}

pub fn phi(x: &[f64], mu: f64) -> Result<Vec<f64>> {
    let p = SmoothingParams::new(mu)?;
    Ok(x.iter().map(|&v| phi_scalar(v, p.mu())).collect())
}

/// Diagonal of the Jacobian of [`phi`].
pub fn phi_jacobian(x: &[f64], mu: f64) -> Result<Vec<f64>> {
    let p = SmoothingParams::new(mu)?;
    Ok(x.iter().map(|&v| (v / p.mu()).tanh()).collect())
}

/// `(‖φ(x) − |x|‖₂, √n ln2 μ)`.
pub fn smoothing_gap(x: &[f64], mu: f64) -> Result<(f64, f64)> {
    let f = phi(x, mu)?;
    let diff: Vec<f64> = f.iter().zip(x).map(|(a, b)| a - b.abs()).collect();
    Ok((norm2_real(&diff), (x.len() as f64).sqrt() * LN_2 * mu))
}

fn moduli(x: &[C64]) -> Vec<f64> {
    x.iter().map(|v| v.norm()).collect()
}

fn plus(x: &[f64], b: &[C64]) -> Vec<C64> {
    x.iter().zip(b).map(|(a, bi)| a + bi).collect()
}

/// One nonlinear CSCS-like step `Θ(x) = V(U(x))`.
pub fn theta<S: AlternatingSplitting>(split: &S, b: &[C64], x: &[C64]) -> Vec<C64> {
    let u = split.first_half(x, &plus(&moduli(x), b));
    split.second_half(&u, &plus(&moduli(&u), b))
}

/// The same step with `|·|` replaced by `φ` applied to the modulus.
pub fn theta_smoothed<S: AlternatingSplitting>(
    split: &S,
    b: &[C64],
    x: &[C64],
    mu: f64,
) -> Result<Vec<C64>> {
    let u = split.first_half(x, &plus(&phi(&moduli(x), mu)?, b));
    Ok(split.second_half(&u, &plus(&phi(&moduli(&u), mu)?, b)))
}

/// Dense quantities around a solution `x*` of the smoothed problem.
#[derive(Clone, Debug, PartialEq)]
pub struct AttractionDiagnostics {
    /// `ρ(M(σ, x*))`, `M(σ, x*) = (σI + S)⁻¹ (σI − C + D) (σI + C)⁻¹ (σI − S + D)`.
    pub spectral_radius: f64,
    /// `max{‖(σI + C)⁻¹‖₂, ‖(σI + S)⁻¹‖₂}`
    pub delta: f64,
    /// `max{‖(σI − S)(σI + S)⁻¹‖₂, ‖(σI − C)(σI + C)⁻¹‖₂}`
    pub xi: f64,
    /// Variant of `delta` with the Jacobian factor kept: `max{‖D(σI + S)⁻¹‖₂, ‖D(σI + C)⁻¹‖₂}`.
    pub delta_with_jacobian: f64,
}

impl AttractionDiagnostics {
    pub fn bound(&self) -> f64 {
        (self.xi + self.delta).powi(2)
    }

    /// `δ < 1 − ξ`, under which the bound certifies `ρ < 1`.
    pub fn condition_holds(&self) -> bool {
        self.delta < 1.0 - self.xi
    }
}

struct DenseShifted {
    c_plus_inv: DenseMatrix,
    s_plus_inv: DenseMatrix,
    c_minus: DenseMatrix,
    s_minus: DenseMatrix,
    s_plus: DenseMatrix,
}

fn dense_shifted(a: &ToeplitzMatrix, sigma: f64) -> Result<DenseShifted> {
    if !(sigma > 0.0) {
        return Err(Error::NonPositiveSigma(sigma));
    }
    check_cap(a.dim(), DEFAULT_DENSE_CAP)?;
    let (c, s) = a.cscs_split();
    let (c, s) = (dense_circulant(&c), dense_skew_circulant(&s));
    let shift = C64::new(sigma, 0.0);
    let neg = C64::new(-1.0, 0.0);
    let c_plus = c.shifted(shift);
    let s_plus = s.shifted(shift);
    Ok(DenseShifted {
        c_plus_inv: c_plus.inverse()?,
        s_plus_inv: s_plus.inverse()?,
        c_minus: c.scale(neg).shifted(shift),
        s_minus: s.scale(neg).shifted(shift),
        s_plus,
    })
}

pub fn attraction_diagnostics(
    a: &ToeplitzMatrix,
    sigma: f64,
    x_star: &[f64],
    mu: f64,
) -> Result<AttractionDiagnostics> {
    if x_star.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: x_star.len(),
        });
    }
    let jac: Vec<C64> = phi_jacobian(x_star, mu)?
        .iter()
        .map(|&v| C64::new(v, 0.0))
        .collect();
    let d = DenseMatrix::from_diagonal(&jac);
    let m = dense_shifted(a, sigma)?;
    let product = m
        .s_plus_inv
        .matmul(&m.c_minus.add(&d))
        .matmul(&m.c_plus_inv)
        .matmul(&m.s_minus.add(&d));
    let delta = m.c_plus_inv.norm2().max(m.s_plus_inv.norm2());
    let xi = m
        .s_minus
        .matmul(&m.s_plus_inv)
        .norm2()
        .max(m.c_minus.matmul(&m.c_plus_inv).norm2());
    let delta_with_jacobian = d
        .matmul(&m.s_plus_inv)
        .norm2()
        .max(d.matmul(&m.c_plus_inv).norm2());
    Ok(AttractionDiagnostics {
        spectral_radius: product.spectral_radius()?,
        delta,
        xi,
        delta_with_jacobian,
    })
}

/// `ρ(M(σ, x*))` with `D = φ'(x*)`.
pub fn attraction_spectral_radius(
    a: &ToeplitzMatrix,
    sigma: f64,
    x_star: &[f64],
    mu: f64,
) -> Result<f64> {
    Ok(attraction_diagnostics(a, sigma, x_star, mu)?.spectral_radius)
}

/// `‖σI + S‖₂ ε / ((2 + ‖(σI + C)⁻¹‖₂) √n ln2)`.
pub fn mu_threshold(a: &ToeplitzMatrix, sigma: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {eps}"
        )));
    }
    let m = dense_shifted(a, sigma)?;
    let n = a.dim() as f64;
    Ok(m.s_plus.norm2() * eps / ((2.0 + m.c_plus_inv.norm2()) * n.sqrt() * LN_2))
}
