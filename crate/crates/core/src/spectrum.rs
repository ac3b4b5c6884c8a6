//! Fourier diagonalization of circulant and skew-circulant matrices.
//!
//! Transform convention, fixed for the whole crate:
//!
//! * forward DFT: `X_k = Σ_j x_j e^{-2πi jk/n}` (exponent sign [`DFT_SIGN`] = −1),
//! * inverse DFT carries the full `1/n` factor.
//!
//! A circulant matrix with first column `c` then factors as
//! `C = F⁻¹ diag(F c) F`, and a skew-circulant matrix with first column `s` as
//! `S = Ω* F⁻¹ diag(F Ω s) F Ω` with `Ω = diag(e^{-jπi/n})`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Sign of the exponent in the forward transform.
pub const DFT_SIGN: i32 = -1;

/// Threshold on `min_k |σ + λ_k|` below which a shifted solve is refused.
pub const NEAR_SINGULAR_SHIFT: f64 = 1e-14;

/// Planned forward/inverse transforms of one length.
#[derive(Clone)]
pub struct Dft {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Dft {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Dft {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, buf: &mut [C64]) {
        self.forward.process(buf);
    }

    /// Inverse transform including the `1/n` normalization.
    pub fn inverse(&self, buf: &mut [C64]) {
        self.inverse.process(buf);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
}

impl fmt::Debug for Dft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dft").field("n", &self.n).finish()
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::NonPositiveSigma(sigma));
    }
    Ok(())
}

fn min_shifted_modulus(lambdas: &[C64], sigma: f64) -> f64 {
    lambdas
        .iter()
        .map(|l| (sigma + l).norm())
        .fold(f64::INFINITY, f64::min)
}

fn divide_shifted(buf: &mut [C64], lambdas: &[C64], sigma: f64) {
    for (v, l) in buf.iter_mut().zip(lambdas) {
        *v /= sigma + l;
    }
}

/// Eigenvalues of a circulant matrix together with the transform that diagonalizes it.
#[derive(Clone, Debug)]
pub struct CirculantSpectrum {
    lambdas: Vec<C64>,
    dft: Dft,
}

impl CirculantSpectrum {
    /// Spectrum of the circulant matrix whose first column is `c`.
    pub fn from_first_column(c: &[C64]) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::Empty);
        }
        let dft = Dft::new(c.len());
        let mut lambdas = c.to_vec();
        dft.forward(&mut lambdas);
        Ok(CirculantSpectrum { lambdas, dft })
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambdas(&self) -> &[C64] {
        &self.lambdas
    }

    pub fn dft_sign(&self) -> i32 {
        DFT_SIGN
    }

    pub fn min_real_part(&self) -> f64 {
        self.lambdas
            .iter()
            .map(|l| l.re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_shifted_modulus(&self, sigma: f64) -> f64 {
        min_shifted_modulus(&self.lambdas, sigma)
    }

    /// `y ← C y`
    pub fn apply_in_place(&self, y: &mut [C64]) {
        self.dft.forward(y);
        for (v, l) in y.iter_mut().zip(&self.lambdas) {
            *v *= l;
        }
        self.dft.inverse(y);
    }

    pub fn apply(&self, y: &[C64]) -> Result<Vec<C64>> {
        check_len(self.len(), y.len())?;
        let mut out = y.to_vec();
        self.apply_in_place(&mut out);
        Ok(out)
    }

    /// `y ← (σI + C)⁻¹ y`
    pub fn shifted_solve_in_place(&self, sigma: f64, y: &mut [C64]) -> Result<()> {
        check_sigma(sigma)?;
        check_len(self.len(), y.len())?;
        let m = self.min_shifted_modulus(sigma);
        if m <= NEAR_SINGULAR_SHIFT {
            return Err(Error::NearSingularShift(m));
        }
        self.dft.forward(y);
        divide_shifted(y, &self.lambdas, sigma);
        self.dft.inverse(y);
        Ok(())
    }

    /// Solve `(σI + C) x = y`.
    pub fn shifted_solve(&self, sigma: f64, y: &[C64]) -> Result<Vec<C64>> {
        let mut out = y.to_vec();
        self.shifted_solve_in_place(sigma, &mut out)?;
        Ok(out)
    }
}

/// Eigenvalues of a skew-circulant matrix and the diagonal scaling `Ω`.
#[derive(Clone, Debug)]
pub struct SkewCirculantSpectrum {
    lambdas: Vec<C64>,
    omega: Vec<C64>,
    dft: Dft,
}

/// Diagonal of `Ω`: `ω_j = e^{-jπi/n}`.
pub fn skew_scaling(n: usize) -> Vec<C64> {
    (0..n)
        .map(|j| C64::from_polar(1.0, -std::f64::consts::PI * j as f64 / n as f64))
        .collect()
}

impl SkewCirculantSpectrum {
    /// Spectrum of the skew-circulant matrix whose first column is `s`.
    pub fn from_first_column(s: &[C64]) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Empty);
        }
        let n = s.len();
        let omega = skew_scaling(n);
        let dft = Dft::new(n);
        let mut lambdas: Vec<C64> = s.iter().zip(&omega).map(|(a, w)| a * w).collect();
        dft.forward(&mut lambdas);
        Ok(SkewCirculantSpectrum {
            lambdas,
            omega,
            dft,
        })
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambdas(&self) -> &[C64] {
        &self.lambdas
    }

    pub fn omega(&self) -> &[C64] {
        &self.omega
    }

    pub fn min_real_part(&self) -> f64 {
        self.lambdas
            .iter()
            .map(|l| l.re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_shifted_modulus(&self, sigma: f64) -> f64 {
        min_shifted_modulus(&self.lambdas, sigma)
    }

    fn sandwich(&self, y: &mut [C64], mid: impl FnOnce(&mut [C64])) {
        for (v, w) in y.iter_mut().zip(&self.omega) {
            *v *= w;
        }
        self.dft.forward(y);
        mid(y);
        self.dft.inverse(y);
        for (v, w) in y.iter_mut().zip(&self.omega) {
            *v *= w.conj();
        }
    }

    /// `y ← S y`
    pub fn apply_in_place(&self, y: &mut [C64]) {
        let lambdas = &self.lambdas;
        self.sandwich(y, |buf| {
            for (v, l) in buf.iter_mut().zip(lambdas) {
                *v *= l;
            }
        });
    }

    pub fn apply(&self, y: &[C64]) -> Result<Vec<C64>> {
        check_len(self.len(), y.len())?;
        let mut out = y.to_vec();
        self.apply_in_place(&mut out);
        Ok(out)
    }

    /// `y ← (σI + S)⁻¹ y`
    pub fn shifted_solve_in_place(&self, sigma: f64, y: &mut [C64]) -> Result<()> {
        check_sigma(sigma)?;
        check_len(self.len(), y.len())?;
        let m = self.min_shifted_modulus(sigma);
        if m <= NEAR_SINGULAR_SHIFT {
            return Err(Error::NearSingularShift(m));
        }
        let lambdas = &self.lambdas;
        self.sandwich(y, |buf| divide_shifted(buf, lambdas, sigma));
        Ok(())
    }

    /// Solve `(σI + S) x = y`.
    pub fn shifted_solve(&self, sigma: f64, y: &[C64]) -> Result<Vec<C64>> {
        let mut out = y.to_vec();
        self.shifted_solve_in_place(sigma, &mut out)?;
        Ok(out)
    }
}
