use std::f64::consts::PI;

use proptest::prelude::*;
use zeta_arclen::riemann::{z1, EvalWindow};
use zeta_arclen::stochastic::{
    distribution_check, distribution_check_against, lyapunov_ratio, mc_moments, phi1, phi1_samples, phi2_mc,
    sample_phases, third_moment_sum, variance_asymptotic, variance_exact, variance_std_error, McConfig,
    McEstimate, PhaseSample, KS_THRESHOLD,
};

const SEED: u64 = 42;

fn p_window(p: f64) -> EvalWindow {
    EvalWindow::for_truncation(p).unwrap()
}

const P_GRID: [f64; 5] = [1e2, 1e3, 1e4, 1e5, 1e6];

#[test]
fn uniform_phase_moments() {
    let w = p_window(100.0);
    let config = McConfig::new(100_000, SEED).unwrap();
    let values: Vec<f64> = (0..config.sample_count).map(|i| sample_phases(&w, &config, i).phases[1]).collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    // φ uniform on [-π, π]: Var φ = π²/3, Var φ² = π⁴/5 - π⁴/9 = 4π⁴/45.
    assert!(mean.abs() <= 3.0 * (PI * PI / 3.0 / n).sqrt());
    let second = values.iter().map(|x| x * x).sum::<f64>() / n;
    assert!((second - PI * PI / 3.0).abs() <= 3.0 * (4.0 * PI.powi(4) / 45.0 / n).sqrt());
}

#[test]
fn phase_vectors_uncorrelated_across_indices() {
    let w = p_window(100.0);
    let config = McConfig::new(20_000, SEED).unwrap();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 0..10_000 {
        xs.extend(sample_phases(&w, &config, 2 * k).phases);
        ys.extend(sample_phases(&w, &config, 2 * k + 1).phases);
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    assert!((cov / (vx * vy).sqrt()).abs() < 0.01);
}

#[test]
fn phi1_zero_mean_and_exact_variance() {
    let w = p_window(100.0);
    let config = McConfig::new(200_000, SEED).unwrap();
    let t = w.start();
    let values = phi1_samples(t, &w, &config).unwrap();
    let est = mc_moments(t, &w, &config).unwrap();
    assert!(est.mean.abs() <= 3.0 * est.std_error);
    let sigma = variance_std_error(&values);
    assert!((est.variance - variance_exact(&w)).abs() <= 3.0 * sigma, "{} vs {}", est.variance, variance_exact(&w));
}

#[test]
fn single_term_moments() {
    // X_n = (2/√n) ln(P/n) cos(a + φ_n) with a fixed a.
    let p = 100.0;
    let w = p_window(p);
    let config = McConfig::new(100_000, SEED).unwrap();
    let a = 0.3;
    for n in [1usize, 7, 60] {
        let amp = 2.0 / (n as f64).sqrt() * (p / n as f64).ln();
        let xs: Vec<f64> =
            (0..config.sample_count).map(|i| amp * (a + sample_phases(&w, &config, i).phases[n - 1]).cos()).collect();
        let est = McEstimate::from_samples(&xs, config.batch_size).unwrap();
        let var = 2.0 / n as f64 * (p / n as f64).ln().powi(2);
        assert!(est.mean.abs() <= 3.0 * est.std_error, "n = {n}");
        assert!((est.variance - var).abs() <= 3.0 * variance_std_error(&xs), "n = {n}");
    }
}

#[test]
fn variance_ratio_tends_to_one() {
    let ratios: Vec<f64> = P_GRID.iter().map(|&p| variance_exact(&p_window(p)) / variance_asymptotic(&p_window(p))).collect();
    let inversions = ratios.windows(2).filter(|r| (r[1] - 1.0).abs() >= (r[0] - 1.0).abs()).count();
    assert!(inversions <= 1, "{ratios:?}");
    let r4 = ratios[2];
    assert!((0.8..=1.2).contains(&r4));
    assert!((r4 - 1.0).abs() < (ratios[0] - 1.0).abs());
}

#[test]
fn variance_gap_is_order_log_squared() {
    let grid = [1e2, 1e3, 1e4, 1e5];
    let c = grid
        .iter()
        .map(|&p| {
            let w = p_window(p);
            (variance_exact(&w) - variance_asymptotic(&w)).abs() / w.log_truncation().powi(2)
        })
        .fold(0.0, f64::max);
    // Computed values lie in [1.17, 1.22]; a single C bounds all of them.
    assert!(c < 1.5, "fitted C = {c}");
}

#[test]
fn lyapunov_ratio_decreases() {
    let ratios: Vec<f64> = P_GRID.iter().map(|&p| lyapunov_ratio(&p_window(p))).collect();
    assert!(ratios.windows(2).all(|r| r[1] < r[0]), "{ratios:?}");
    for (&p, &r) in P_GRID.iter().zip(&ratios) {
        assert!(r * p.ln().powf(1.5) <= 20.0);
    }
    // Doubling grid from P = 100.
    let mut p = 100.0;
    let mut prev = f64::INFINITY;
    while p <= 1e5 {
        let r = lyapunov_ratio(&p_window(p));
        assert!(r < prev);
        prev = r;
        p *= 2.0;
    }
    // At P = 10⁶ the ratio is 0.200192 (direct summation), not yet below 0.2.
    assert!((ratios[4] - 0.200_192_469_708_493_5).abs() < 1e-9);
    assert!(third_moment_sum(&p_window(1e6)) > 0.0);
}

#[test]
fn gaussian_fit_at_p_200() {
    let w = EvalWindow::with_truncation(1.0e6, 1.0, 200.0).unwrap();
    let config = McConfig::new(10_000, SEED).unwrap();
    let ks = distribution_check(w.start(), &w, &config).unwrap();
    assert!(ks <= KS_THRESHOLD, "KS = {ks}");
    let ks_mid = distribution_check(w.start() + 0.5, &w, &config).unwrap();
    assert!(ks_mid <= KS_THRESHOLD, "KS = {ks_mid}");
    // Half the standard deviation must be rejected.
    let wrong = distribution_check_against(w.start(), &w, &config, variance_exact(&w) / 4.0).unwrap();
    assert!(wrong > 0.1, "KS = {wrong}");
}

#[test]
fn ks_trend_with_sample_count() {
    let w = EvalWindow::with_truncation(1.0e6, 1.0, 200.0).unwrap();
    let ks: Vec<f64> = [1_000, 4_000, 16_000]
        .iter()
        .map(|&n| distribution_check(w.start(), &w, &McConfig::new(n, SEED).unwrap()).unwrap())
        .collect();
    let inversions = ks.windows(2).filter(|k| k[1] > k[0]).count();
    assert!(inversions <= 1, "{ks:?}");
}

#[test]
fn monte_carlo_is_thread_count_independent() {
    let w = p_window(150.0);
    let config = McConfig { sample_count: 5_000, master_seed: 9, batch_size: 128 };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| mc_moments(w.start(), &w, &config).unwrap())
    };
    let a = run(1);
    let b = run(3);
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.variance.to_bits(), b.variance.to_bits());
}

#[test]
fn phi2_realizations_at_least_window_length() {
    let w = EvalWindow::new(1.0e6, 1.0).unwrap();
    let r = phi2_mc(&w, &McConfig::new(20, SEED).unwrap()).unwrap();
    assert!(r.min_value >= 1.0);
    assert_eq!(r.failures, 0);
    assert_eq!(r.estimate.count, 20);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn zero_phases_equal_deterministic_series(offset in 0.0f64..20.0) {
        let w = EvalWindow::new(2.0e5, 20.0).unwrap();
        let t = w.start() + offset;
        let a = phi1(t, &PhaseSample::zero(&w), &w).unwrap();
        let b = z1(t, &w).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
    }

    #[test]
    fn phases_reproducible_and_in_range(seed in any::<u64>(), index in 0usize..1000) {
        let w = p_window(30.0);
        let config = McConfig::new(1000, seed).unwrap();
        let a = sample_phases(&w, &config, index);
        prop_assert_eq!(&a, &sample_phases(&w, &config, index));
        prop_assert_eq!(a.phases.len(), w.term_count());
        prop_assert!(a.phases.iter().all(|p| (-PI..=PI).contains(p)));
    }
}
