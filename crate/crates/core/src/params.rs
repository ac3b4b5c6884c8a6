//! Selection of the iteration parameter σ.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectrum::{CirculantSpectrum, SkewCirculantSpectrum, NEAR_SINGULAR_SHIFT};
use crate::toeplitz::ToeplitzMatrix;
use crate::vecops::{dot, norm2};

pub const SIGMA_MIN: f64 = 1e-4;
pub const SIGMA_MAX: f64 = 1e4;
/// Relative accuracy of the σ search.
pub const SIGMA_REL_TOL: f64 = 1e-6;
const SCAN_POINTS: usize = 400;

/// Relative tolerance of the extremal-eigenvalue iterations behind `sigma_hss_opt`.
pub const EIG_REL_TOL: f64 = 1e-8;
const EIG_MAXIT: usize = 20_000;

fn cayley_max(sigma: f64, lambdas: &[C64]) -> Result<f64> {
    let mut m: f64 = 0.0;
    for l in lambdas {
        let den = (sigma + l).norm();
        if den <= NEAR_SINGULAR_SHIFT {
            return Err(Error::NearSingularShift(den));
        }
        m = m.max((sigma - l).norm() / den);
    }
    Ok(m)
}

/// `max_k |(σ − λᶜ_k)/(σ + λᶜ_k)| · max_k |(σ − λˢ_k)/(σ + λˢ_k)|`.
pub fn convergence_factor_bound(
    sigma: f64,
    circulant: &CirculantSpectrum,
    skew: &SkewCirculantSpectrum,
) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::NonPositiveSigma(sigma));
    }
    Ok(cayley_max(sigma, circulant.lambdas())? * cayley_max(sigma, skew.lambdas())?)
}

/// σ minimizing [`convergence_factor_bound`] over `[SIGMA_MIN, SIGMA_MAX]`.
///
/// A log-spaced scan brackets the global minimum; golden-section search on
/// `log σ` then refines it to relative accuracy [`SIGMA_REL_TOL`].
pub fn sigma_cscs_opt(circulant: &CirculantSpectrum, skew: &SkewCirculantSpectrum) -> Result<f64> {
    let f = |t: f64| convergence_factor_bound(t.exp(), circulant, skew).unwrap_or(f64::INFINITY);
    let (lo, hi) = (SIGMA_MIN.ln(), SIGMA_MAX.ln());
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| lo + step * i as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    let best = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    if !vals[best].is_finite() {
        return Err(Error::InvalidParameter(
            "convergence factor bound is undefined on the search range".into(),
        ));
    }
    if best == 0 || best == SCAN_POINTS - 1 {
        log::warn!("no interior minimum of the convergence factor bound; returning boundary σ");
        return Ok(grid[best].exp());
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    // |Δ log σ| ≈ relative change in σ
    while (b - a) > SIGMA_REL_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    Ok(((a + b) / 2.0).exp())
}

fn start_vector(n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n)
        .map(|j| {
            C64::new(
                1.0 + 0.5 * (j as f64 * 0.7).sin(),
                0.25 * (j as f64 * 1.3).cos(),
            )
        })
        .collect();
    let nrm = norm2(&v);
    v.into_iter().map(|x| x / nrm).collect()
}

fn rayleigh(h: &ToeplitzMatrix, v: &[C64]) -> f64 {
    dot(v, &h.matvec(v).expect("dimension")).re / dot(v, v).re
}

/// Largest eigenvalue of a Hermitian Toeplitz matrix by power iteration.
fn largest_eigenvalue(h: &ToeplitzMatrix) -> f64 {
    let mut v = start_vector(h.dim());
    let mut lambda = rayleigh(h, &v);
    for _ in 0..EIG_MAXIT {
        let w = h.matvec(&v).expect("dimension");
        let nrm = norm2(&w);
        if nrm == 0.0 {
            return 0.0;
        }
        v = w.into_iter().map(|x| x / nrm).collect();
        let next = rayleigh(h, &v);
        if (next - lambda).abs() <= EIG_REL_TOL * next.abs() * 1e-2 {
            return next;
        }
        lambda = next;
    }
    lambda
}

/// Conjugate gradients for Hermitian positive definite `H`; `None` on non-positive curvature.
fn cg_solve(h: &ToeplitzMatrix, b: &[C64], tol: f64) -> Option<Vec<C64>> {
    let n = b.len();
    let mut x = vec![C64::new(0.0, 0.0); n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r).re;
    let bn = rr.sqrt();
    for _ in 0..(10 * n).max(100) {
        if rr.sqrt() <= tol * bn {
            break;
        }
        let hp = h.matvec(&p).expect("dimension");
        let curv = dot(&p, &hp).re;
        if curv <= 0.0 {
            return None;
        }
        let alpha = rr / curv;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * hp[i];
        }
        let rr_new = dot(&r, &r).re;
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    Some(x)
}

/// Smallest eigenvalue of a Hermitian positive definite Toeplitz matrix by inverse iteration.
fn smallest_eigenvalue(h: &ToeplitzMatrix) -> Result<f64> {
    let mut v = start_vector(h.dim());
    let mut lambda = rayleigh(h, &v);
    if lambda <= 0.0 {
        return Err(Error::Indefinite(lambda));
    }
    for _ in 0..EIG_MAXIT {
        let w = cg_solve(h, &v, 1e-13).ok_or(Error::Indefinite(lambda))?;
        let nrm = norm2(&w);
        v = w.into_iter().map(|x| x / nrm).collect();
        let next = rayleigh(h, &v);
        if next <= 0.0 {
            return Err(Error::Indefinite(next));
        }
        if (next - lambda).abs() <= EIG_REL_TOL * next.abs() * 1e-2 {
            return Ok(next);
        }
        lambda = next;
    }
    Ok(lambda)
}

/// `√(λ_min λ_max)` of the Hermitian part `(A + Aᴴ)/2`.
pub fn sigma_hss_opt(a: &ToeplitzMatrix) -> Result<f64> {
    let h = a.hermitian_part();
    let lmax = largest_eigenvalue(&h);
    if lmax <= 0.0 {
        return Err(Error::Indefinite(lmax));
    }
    let lmin = smallest_eigenvalue(&h)?;
    Ok((lmin * lmax).sqrt())
}

/// Extremal eigenvalues `(λ_min, λ_max)` of the Hermitian part.
pub fn hermitian_extremes(a: &ToeplitzMatrix) -> Result<(f64, f64)> {
    let h = a.hermitian_part();
    Ok((smallest_eigenvalue(&h)?, largest_eigenvalue(&h)))
}
