#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use toeplitz_ave::{AveProblem, ToeplitzMatrix, C64};

pub fn rand_c(rng: &mut StdRng, scale: f64) -> C64 {
    C64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Random Toeplitz matrix whose circulant and skew-circulant parts are positive definite.
pub fn random_pd_toeplitz(rng: &mut StdRng, n: usize) -> ToeplitzMatrix {
    let mut col: Vec<C64> = (0..n).map(|_| rand_c(rng, 1.0)).collect();
    let mut row: Vec<C64> = (0..n).map(|_| rand_c(rng, 1.0)).collect();
    row[0] = col[0];
    let a = ToeplitzMatrix::new(col.clone(), row.clone()).unwrap();
    let (c, s) = a.cscs_spectra().unwrap();
    let m = c.min_real_part().min(s.min_real_part());
    // each part carries half of the diagonal
    let lift = 2.0 * (rng.gen_range(0.1..1.0) - m.min(0.0));
    col[0] += lift;
    row[0] = col[0];
    ToeplitzMatrix::new(col, row).unwrap()
}

/// Strongly diagonally dominant Toeplitz matrix, so the equation is uniquely solvable.
pub fn random_dominant_toeplitz(rng: &mut StdRng, n: usize) -> ToeplitzMatrix {
    let mut col: Vec<C64> = (0..n).map(|_| rand_c(rng, 1.0) / n as f64).collect();
    let mut row: Vec<C64> = (0..n).map(|_| rand_c(rng, 1.0) / n as f64).collect();
    col[0] = C64::new(rng.gen_range(4.0..6.0), rng.gen_range(-0.5..0.5));
    row[0] = col[0];
    ToeplitzMatrix::new(col, row).unwrap()
}

pub fn random_problem(rng: &mut StdRng, n: usize) -> AveProblem {
    let a = random_dominant_toeplitz(rng, n);
    let xs: Vec<C64> = (0..n).map(|_| rand_c(rng, 2.0)).collect();
    let ax = a.matvec(&xs).unwrap();
    let b = ax.iter().zip(&xs).map(|(v, x)| v - x.norm()).collect();
    AveProblem::new(a, b, Some(xs)).unwrap()
}
