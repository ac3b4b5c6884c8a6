//! Small dense-vector kernels shared by the iterative solvers.

use num_complex::Complex64 as C64;

/// Conjugated inner product `x^H y`.
#[inline]
pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

#[inline]
pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

#[inline]
pub fn norm2_real(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `y += a * x`
#[inline]
pub fn axpy(a: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

#[inline]
pub fn sub(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Relative difference `‖x − y‖₂ / max(‖y‖₂, tiny)`.
pub fn rel_diff(x: &[C64], y: &[C64]) -> f64 {
    let d = norm2(&sub(x, y));
    d / norm2(y).max(f64::MIN_POSITIVE)
}

pub fn from_real(x: &[f64]) -> Vec<C64> {
    x.iter().map(|&v| C64::new(v, 0.0)).collect()
}
