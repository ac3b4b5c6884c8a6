mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use toeplitz_ave::ave::{ave_residual, solve, Method, SolverConfig};
use toeplitz_ave::dense::{dense_circulant, dense_skew_circulant, DenseMatrix};
use toeplitz_ave::linear::{gmres_restarted, iteration_matrix_dense, tfqmr, CscsSplitting};
use toeplitz_ave::params::{convergence_factor_bound, sigma_cscs_opt, sigma_hss_opt};
use toeplitz_ave::problems::{
    example1_problem, example2_problem, fractional_matrix, grunwald_coeffs, Example1Params,
    Example2Params,
};
use toeplitz_ave::smoothing::{
    mu_threshold, phi, phi_jacobian, smoothing_gap, theta, theta_smoothed,
};
use toeplitz_ave::vecops::{norm2, rel_diff};
use toeplitz_ave::{ToeplitzMatrix, C64};

use common::{rand_c, random_dominant_toeplitz, random_pd_toeplitz, random_problem};

fn random_toeplitz(rng: &mut StdRng, n: usize) -> ToeplitzMatrix {
    let col: Vec<C64> = (0..n).map(|_| rand_c(rng, 1.0)).collect();
    let mut row: Vec<C64> = (0..n).map(|_| rand_c(rng, 1.0)).collect();
    row[0] = col[0];
    ToeplitzMatrix::new(col, row).unwrap()
}

fn rand_vec(rng: &mut StdRng, n: usize) -> Vec<C64> {
    (0..n).map(|_| rand_c(rng, 1.0)).collect()
}

/// Largest distance from a point of `a` to its nearest unused partner in `b`.
fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn split_parts_sum_to_matrix(seed in any::<u64>(), n in 1usize..=64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_toeplitz(&mut rng, n);
        let (c, s) = a.cscs_split();
        let sum = dense_circulant(&c).add(&dense_skew_circulant(&s));
        prop_assert!(sum.max_abs_diff(&a.to_dense().unwrap()) <= 1e-14);
    }

    #[test]
    fn spectra_match_dense_eigenvalues(seed in any::<u64>(), n in 1usize..=32) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_toeplitz(&mut rng, n);
        let (c, s) = a.cscs_split();
        let (cs, ss) = a.cscs_spectra().unwrap();
        let ec = dense_circulant(&c).eigenvalues().unwrap();
        let es = dense_skew_circulant(&s).eigenvalues().unwrap();
        prop_assert!(multiset_distance(cs.lambdas(), &ec) <= 1e-10);
        prop_assert!(multiset_distance(ss.lambdas(), &es) <= 1e-10);
    }

    #[test]
    fn fast_matvec_matches_dense(seed in any::<u64>(), n in 2usize..=128) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_toeplitz(&mut rng, n);
        let x = rand_vec(&mut rng, n);
        let want = a.to_dense().unwrap().matvec(&x);
        prop_assert!(rel_diff(&a.matvec(&x).unwrap(), &want) <= 1e-12);
    }

    #[test]
    fn shifted_solves_leave_small_residual(seed in any::<u64>(), n in 1usize..=48, sigma in 0.01f64..20.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_toeplitz(&mut rng, n);
        let (c, s) = a.cscs_split();
        let (cs, ss) = a.cscs_spectra().unwrap();
        prop_assume!(cs.min_shifted_modulus(sigma) >= 1e-6 && ss.min_shifted_modulus(sigma) >= 1e-6);
        let y = rand_vec(&mut rng, n);
        let shift = C64::new(sigma, 0.0);
        for (dense, x) in [
            (dense_circulant(&c), cs.shifted_solve(sigma, &y).unwrap()),
            (dense_skew_circulant(&s), ss.shifted_solve(sigma, &y).unwrap()),
        ] {
            let r: Vec<C64> = dense.shifted(shift).matvec(&x).iter().zip(&y).map(|(u, v)| u - v).collect();
            prop_assert!(norm2(&r) / norm2(&y) <= 1e-12);
        }
    }

    #[test]
    fn splitting_iteration_contracts(seed in any::<u64>(), n in 1usize..=32) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_pd_toeplitz(&mut rng, n);
        for sigma in [0.1, 1.0, 10.0] {
            prop_assert!(iteration_matrix_dense(&a, sigma).unwrap().spectral_radius().unwrap() < 1.0);
        }
    }

    #[test]
    fn krylov_solvers_reach_tolerance(seed in any::<u64>(), n in 1usize..=32) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = DenseMatrix::from_fn(n, |i, j| {
            let v = rand_c(&mut rng, 1.0) / (n as f64).sqrt();
            if i == j { v + 2.0 } else { v }
        });
        let b = rand_vec(&mut rng, n);
        let x0 = vec![C64::new(0.0, 0.0); n];
        let (x, rep) = gmres_restarted(&m, &b, n, 1e-8, 2 * n, &x0).unwrap();
        prop_assert!(rep.converged && rep.iterations <= 2 * n);
        prop_assert!(norm2(&m.matvec(&x).iter().zip(&b).map(|(u, v)| u - v).collect::<Vec<_>>()) <= 1e-8 * norm2(&b));
        let (x, rep) = tfqmr(&m, &b, 1e-8, 2 * n, &x0).unwrap();
        prop_assert!(rep.converged && rep.iterations <= 2 * n);
        prop_assert!(norm2(&m.matvec(&x).iter().zip(&b).map(|(u, v)| u - v).collect::<Vec<_>>()) <= 1e-8 * norm2(&b) * 1.0001);
    }

    #[test]
    fn converged_runs_verify_and_settle(seed in any::<u64>(), n in 1usize..=48, which in 0usize..8) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_problem(&mut rng, n);
        let method = Method::ALL[which];
        let (x, rep) = solve(&p, &SolverConfig::with_method(method, 3.0)).unwrap();
        if rep.converged {
            // dense re-verification of the residual
            let ax = p.matrix().to_dense().unwrap().matvec(&x);
            let r: Vec<C64> = ax.iter().zip(&x).zip(p.rhs()).map(|((u, xi), bi)| u - xi.norm() - bi).collect();
            prop_assert!(norm2(&r) / norm2(p.rhs()) <= 1e-7 * (1.0 + 1e-9));
            prop_assert!(ave_residual(&p, &x).unwrap() <= 1e-7);
            let h = &rep.residual_history;
            for w in h[h.len().saturating_sub(5)..].windows(2) {
                prop_assert!(w[1] <= 1.1 * w[0]);
            }
        }
    }

    #[test]
    fn gap_bound_and_jacobian_range(seed in any::<u64>(), n in 1usize..=64, log_mu in -8.0f64..2.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mu = 10f64.powf(log_mu);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-50.0..50.0) * mu).collect();
        let (gap, bound) = smoothing_gap(&x, mu).unwrap();
        prop_assert!(gap <= bound * (1.0 + 1e-12));
        for (d, xi) in phi_jacobian(&x, mu).unwrap().iter().zip(&x) {
            // tanh rounds to ±1 once |x/μ| exceeds about 19
            prop_assert!(d.abs() < 1.0 || (xi / mu).abs() > 18.0);
        }
        let f = phi(&x, mu).unwrap();
        prop_assert!(f.iter().zip(&x).all(|(fi, xi)| *fi >= xi.abs()));
    }

    #[test]
    fn jacobian_strictly_inside_unit_interval(x in -10.0f64..10.0, mu in 0.6f64..5.0) {
        prop_assert!(phi_jacobian(&[x], mu).unwrap()[0].abs() < 1.0);
    }

    #[test]
    fn smoothing_gap_monotone_in_mu(x in -5.0f64..5.0, mu1 in 1e-4f64..2.0, factor in 1.0f64..10.0) {
        let mu2 = mu1 * factor;
        let g1 = phi(&[x], mu1).unwrap()[0] - x.abs();
        let g2 = phi(&[x], mu2).unwrap()[0] - x.abs();
        prop_assert!(g1 <= g2 * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn certified_local_minimum(seed in any::<u64>(), n in 1usize..=32) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_pd_toeplitz(&mut rng, n);
        let (c, s) = a.cscs_spectra().unwrap();
        let opt = sigma_cscs_opt(&c, &s).unwrap();
        let f = |t: f64| convergence_factor_bound(t, &c, &s).unwrap();
        prop_assert!(f(opt) <= f(opt / 2.0) && f(opt) <= f(2.0 * opt));
        let rho = iteration_matrix_dense(&a, opt).unwrap().spectral_radius().unwrap();
        prop_assert!(rho <= f(opt) * (1.0 + 1e-10) + 1e-14);
    }

    #[test]
    fn hss_parameter_scales_with_matrix(seed in any::<u64>(), n in 2usize..=24, t in 0.1f64..10.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_dominant_toeplitz(&mut rng, n);
        let s1 = sigma_hss_opt(&a).unwrap();
        let st = sigma_hss_opt(&a.scaled(t)).unwrap();
        prop_assert!((st - t * s1).abs() <= 1e-7 * t * s1);
    }

    #[test]
    fn generated_problems_satisfy_solution_invariant(n in 3usize..=96, gamma in 2.0f64..20.0, c in -4.0f64..4.0, d in -4.0f64..4.0) {
        let p = example1_problem(&Example1Params { n, gamma, c, d }).unwrap();
        let xs = p.exact_solution().unwrap();
        prop_assert!(ave_residual(&p, xs).unwrap() <= 1e-12);
    }

    #[test]
    fn residual_and_one_step_forms_agree(seed in any::<u64>(), n in 1usize..=32, sigma in 1.0f64..4.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_problem(&mut rng, n);
        for (a, b) in [
            (Method::PicardCscs, Method::PicardCscsResidualUpdate),
            (Method::CscsLike, Method::CscsLikeResidualUpdate),
        ] {
            let (xa, ra) = solve(&p, &SolverConfig::with_method(a, sigma)).unwrap();
            let (xb, rb) = solve(&p, &SolverConfig::with_method(b, sigma)).unwrap();
            prop_assert_eq!(ra.it_out, rb.it_out);
            prop_assert!(rel_diff(&xa, &xb) <= 1e-9);
        }
    }
}

#[test]
fn grunwald_signs_and_partial_sums() {
    for k in 1..=9 {
        let alpha = 1.0 + 0.1 * k as f64;
        let g = grunwald_coeffs(alpha, 64).unwrap();
        assert!(g[1] < 0.0);
        assert!(g[2..].iter().all(|&v| v > 0.0), "alpha {alpha}");
        let partial: Vec<f64> = g
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect();
        for w in partial[2..].windows(2) {
            assert!(w[1].abs() < w[0].abs());
        }
        // 1 − α < 0 and every later term is positive, so the sums rise toward 0 from below
        assert!(partial[1..].iter().all(|&s| s > -1.0 && s < 0.0));
    }
}

#[test]
fn fractional_matrix_matches_dense_assembly() {
    let n = 8;
    let p = Example2Params::benchmark(n, 1.5, 0.6, 0.4);
    let g = grunwald_coeffs(p.alpha, n + 1).unwrap();
    let gm = DenseMatrix::from_fn(n, |i, j| {
        let k = i as isize - j as isize + 1;
        C64::new(if k >= 0 { g[k as usize] } else { 0.0 }, 0.0)
    });
    let gt = DenseMatrix::from_fn(n, |i, j| gm[(j, i)]);
    let nu = p.tau / p.h.powf(p.alpha);
    let want = DenseMatrix::identity(n).sub(
        &gm.scale(C64::new(nu * p.d_plus, 0.0))
            .add(&gt.scale(C64::new(nu * p.d_minus, 0.0))),
    );
    let got = fractional_matrix(&p).unwrap().to_dense().unwrap();
    assert!(got.max_abs_diff(&want) <= 1e-14 * want.max_abs());
}

#[test]
fn fractional_splitting_parts_positive_definite() {
    for (alpha, dp, dm) in [(1.2, 0.5, 0.8), (1.5, 0.6, 0.4), (1.8, 0.7, 0.3)] {
        for n in [128, 256] {
            let a = fractional_matrix(&Example2Params::benchmark(n, alpha, dp, dm)).unwrap();
            let (c, s) = a.cscs_spectra().unwrap();
            assert!(
                c.min_real_part() > 0.0 && s.min_real_part() > 0.0,
                "alpha {alpha} n {n}"
            );
        }
    }
}

#[test]
fn fractional_problem_scales_rhs() {
    let p = Example2Params::benchmark(16, 1.2, 0.5, 0.8);
    let prob = example2_problem(&p).unwrap();
    assert!(prob.exact_solution().is_none());
    let xs = toeplitz_ave::problems::exact_solution(16);
    let r = prob.residual_vector(&xs);
    // residual of x* is (1 − h^α)(A x* − |x*|)
    let ax = prob.matrix().matvec(&xs).unwrap();
    let unscaled: Vec<C64> = ax.iter().zip(&xs).map(|(u, x)| u - x.norm()).collect();
    let k = 1.0 - p.h.powf(p.alpha);
    let want: Vec<C64> = unscaled.iter().map(|v| -k * v).collect();
    assert!(rel_diff(&r, &want) < 1e-12);
}

/// Picard-CSCS converges when ‖A⁻¹‖₂ < 1 and each outer step runs at least the
/// number of sweeps `N` with ‖M(σ)^N‖₂ < (1 − η)/(1 + η).
#[test]
fn picard_converges_in_contractive_regime() {
    let mut rng = StdRng::seed_from_u64(3);
    let eta = 0.01;
    let mut tested = 0;
    while tested < 20 {
        let n = rng.gen_range(2..=32);
        let p = random_problem(&mut rng, n);
        let a = p.matrix();
        let inv_norm = a.to_dense().unwrap().inverse().unwrap().norm2();
        if inv_norm >= 1.0 {
            continue;
        }
        let sigma = rng.gen_range(1.0..4.0);
        let m = iteration_matrix_dense(a, sigma).unwrap();
        let mut power = m.clone();
        let mut sweeps = 1;
        while power.norm2() >= (1.0 - eta) / (1.0 + eta) {
            power = power.matmul(&m);
            sweeps += 1;
            assert!(sweeps < 500);
        }
        let cfg = SolverConfig {
            inner_maxit: sweeps.max(15),
            ..SolverConfig::with_method(Method::PicardCscs, sigma)
        };
        let (_, rep) = solve(&p, &cfg).unwrap();
        assert!(rep.converged, "n {n} sigma {sigma}");
        tested += 1;
    }
}

/// ‖Θ̄(x) − Θ(x)‖₂ for μ at the threshold, over iterates that include zero
/// entries (where the smoothing gap is largest).
#[test]
fn smoothed_map_close_to_exact_map() {
    let mut rng = StdRng::seed_from_u64(17);
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..30 {
        let n = rng.gen_range(1..=32);
        let a = random_pd_toeplitz(&mut rng, n);
        let sigma = rng.gen_range(0.5..5.0);
        let split = CscsSplitting::new(&a, sigma).unwrap();
        let b = rand_vec(&mut rng, n);
        let x: Vec<C64> = (0..n)
            .map(|j| {
                if j % 3 == 0 {
                    C64::new(0.0, 0.0)
                } else {
                    rand_c(&mut rng, 1.0)
                }
            })
            .collect();
        let eps = 10f64.powf(rng.gen_range(-6.0..-2.0));
        let mu = mu_threshold(&a, sigma, eps).unwrap();
        let exact = theta(&split, &b, &x);
        let smooth = theta_smoothed(&split, &b, &x, mu).unwrap();
        let d: Vec<C64> = exact.iter().zip(&smooth).map(|(u, v)| u - v).collect();
        worst_ratio = worst_ratio.max(norm2(&d) / eps);
    }
    assert!(worst_ratio <= 1.0, "worst ‖Θ̄ − Θ‖/ε = {worst_ratio}");
}
