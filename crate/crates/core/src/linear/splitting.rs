use num_complex::Complex64 as C64;

use crate::dense::{check_cap, DenseMatrix, LuFactor, DEFAULT_DENSE_CAP};
use crate::error::{Error, Result};
use crate::spectrum::{CirculantSpectrum, SkewCirculantSpectrum, NEAR_SINGULAR_SHIFT};
use crate::toeplitz::ToeplitzMatrix;

/// A two-part splitting `A = P + Q` with shifted solves at a fixed `σ`.
///
/// The half-steps are `(σI + P) u = (σI − Q) x + f` and `(σI + Q) v = (σI − P) u + f`.
pub trait AlternatingSplitting {
    fn dim(&self) -> usize;
    fn sigma(&self) -> f64;
    /// `y ← P y`
    fn apply_first(&self, y: &mut [C64]);
    /// `y ← Q y`
    fn apply_second(&self, y: &mut [C64]);
    /// `y ← (σI + P)⁻¹ y`
    fn solve_first(&self, y: &mut [C64]);
    /// `y ← (σI + Q)⁻¹ y`
    fn solve_second(&self, y: &mut [C64]);

    /// `(σI + P)⁻¹ ((σI − Q) x + f)`
    fn first_half(&self, x: &[C64], f: &[C64]) -> Vec<C64> {
        let sigma = self.sigma();
        let mut t = x.to_vec();
        self.apply_second(&mut t);
        for ((ti, xi), fi) in t.iter_mut().zip(x).zip(f) {
            *ti = sigma * xi - *ti + fi;
        }
        self.solve_first(&mut t);
        t
    }

    /// `(σI + Q)⁻¹ ((σI − P) x + f)`
    fn second_half(&self, x: &[C64], f: &[C64]) -> Vec<C64> {
        let sigma = self.sigma();
        let mut t = x.to_vec();
        self.apply_first(&mut t);
        for ((ti, xi), fi) in t.iter_mut().zip(x).zip(f) {
            *ti = sigma * xi - *ti + fi;
        }
        self.solve_second(&mut t);
        t
    }

    fn sweep(&self, x: &[C64], f: &[C64]) -> Vec<C64> {
        let half = self.first_half(x, f);
        self.second_half(&half, f)
    }
}

/// Circulant plus skew-circulant splitting, every operation via FFT.
#[derive(Clone, Debug)]
pub struct CscsSplitting {
    circulant: CirculantSpectrum,
    skew: SkewCirculantSpectrum,
    sigma: f64,
}

impl CscsSplitting {
    pub fn new(a: &ToeplitzMatrix, sigma: f64) -> Result<Self> {
        let (circulant, skew) = a.cscs_spectra()?;
        Self::from_spectra(circulant, skew, sigma)
    }

    pub fn from_spectra(
        circulant: CirculantSpectrum,
        skew: SkewCirculantSpectrum,
        sigma: f64,
    ) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::NonPositiveSigma(sigma));
        }
        let m = circulant
            .min_shifted_modulus(sigma)
            .min(skew.min_shifted_modulus(sigma));
        if m <= NEAR_SINGULAR_SHIFT {
            return Err(Error::NearSingularShift(m));
        }
        let split = CscsSplitting {
            circulant,
            skew,
            sigma,
        };
        if !split.positive_definite() {
            log::warn!(
                "CSCS parts are not both positive definite (min Re λ_C = {:e}, min Re λ_S = {:e})",
                split.circulant.min_real_part(),
                split.skew.min_real_part()
            );
        }
        Ok(split)
    }

    pub fn circulant(&self) -> &CirculantSpectrum {
        &self.circulant
    }

    pub fn skew(&self) -> &SkewCirculantSpectrum {
        &self.skew
    }

    /// Both parts have spectra in the open right half-plane.
    pub fn positive_definite(&self) -> bool {
        self.circulant.min_real_part() > 0.0 && self.skew.min_real_part() > 0.0
    }
}

impl AlternatingSplitting for CscsSplitting {
    fn dim(&self) -> usize {
        self.circulant.len()
    }

    fn sigma(&self) -> f64 {
        self.sigma
    }

    fn apply_first(&self, y: &mut [C64]) {
        self.circulant.apply_in_place(y);
    }

    fn apply_second(&self, y: &mut [C64]) {
        self.skew.apply_in_place(y);
    }

    fn solve_first(&self, y: &mut [C64]) {
        self.circulant
            .shifted_solve_in_place(self.sigma, y)
            .expect("shift validated at construction");
    }

    fn solve_second(&self, y: &mut [C64]) {
        self.skew
            .shifted_solve_in_place(self.sigma, y)
            .expect("shift validated at construction");
    }
}

/// Hermitian/skew-Hermitian splitting with dense LU-factored shifted parts.
#[derive(Clone, Debug)]
pub struct HssSplitting {
    hermitian: DenseMatrix,
    skew: DenseMatrix,
    hermitian_lu: LuFactor,
    skew_lu: LuFactor,
    sigma: f64,
}

impl HssSplitting {
    pub fn new(a: &ToeplitzMatrix, sigma: f64) -> Result<Self> {
        Self::with_cap(a, sigma, DEFAULT_DENSE_CAP)
    }

    pub fn with_cap(a: &ToeplitzMatrix, sigma: f64, cap: usize) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::NonPositiveSigma(sigma));
        }
        check_cap(a.dim(), cap)?;
        let hermitian = a.hermitian_part().to_dense_capped(cap)?;
        let skew = a.skew_hermitian_part().to_dense_capped(cap)?;
        let shift = C64::new(sigma, 0.0);
        let hermitian_lu = hermitian.shifted(shift).lu()?;
        let skew_lu = skew.shifted(shift).lu()?;
        Ok(HssSplitting {
            hermitian,
            skew,
            hermitian_lu,
            skew_lu,
            sigma,
        })
    }
}

impl AlternatingSplitting for HssSplitting {
    fn dim(&self) -> usize {
        self.hermitian.dim()
    }

    fn sigma(&self) -> f64 {
        self.sigma
    }

    fn apply_first(&self, y: &mut [C64]) {
        let v = self.hermitian.matvec(y);
        y.copy_from_slice(&v);
    }

    fn apply_second(&self, y: &mut [C64]) {
        let v = self.skew.matvec(y);
        y.copy_from_slice(&v);
    }

    fn solve_first(&self, y: &mut [C64]) {
        self.hermitian_lu.solve_in_place(y);
    }

    fn solve_second(&self, y: &mut [C64]) {
        self.skew_lu.solve_in_place(y);
    }
}
