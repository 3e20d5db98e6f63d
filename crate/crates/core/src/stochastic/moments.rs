//! Exact and asymptotic moments of `Φ₁` at a fixed `t`.
//!
//! With `X_n = (2/√n) ln(P/n) cos(φ_n + a)` and `φ_n` uniform,
//! `E X_n = 0`, `Var X_n = (2/n) ln²(P/n)` and
//! `E|X_n|³ = (8/n^{3/2}) ln³(P/n) · E|cos³| = (32/(3π)) n^{-3/2} ln³(P/n)`.

use std::f64::consts::PI;

use crate::riemann::EvalWindow;

/// `E|cos φ|³` for `φ` uniform on a period.
pub const MEAN_ABS_COS_CUBED: f64 = 4.0 / (3.0 * PI);

/// Sums `f(n, ln(P/n))` over `1 <= n < P`, smallest terms first.
fn sum_terms(window: &EvalWindow, f: impl Fn(f64, f64) -> f64) -> f64 {
    let log_p = window.log_truncation();
    (1..=window.term_count())
        .rev()
        .map(|n| {
            let nf = n as f64;
            f(nf, log_p - nf.ln())
        })
        .sum()
}

/// `Var Φ₁ = 2 Σ_{n<P} (1/n) ln²(P/n)`.
pub fn variance_exact(window: &EvalWindow) -> f64 {
    2.0 * sum_terms(window, |n, l| l * l / n)
}

/// `(2/3) ln³P`.
pub fn variance_asymptotic(window: &EvalWindow) -> f64 {
    2.0 / 3.0 * window.log_truncation().powi(3)
}

/// `Σ_{n<P} E|X_n|³ = (32/(3π)) Σ n^{-3/2} ln³(P/n)`.
pub fn third_moment_sum(window: &EvalWindow) -> f64 {
    8.0 * MEAN_ABS_COS_CUBED * sum_terms(window, |n, l| l * l * l / (n * n.sqrt()))
}

/// The cruder bound `8 Σ n^{-3/2} ln³(P/n)` obtained from `|cos| <= 1`.
pub fn third_moment_bound(window: &EvalWindow) -> f64 {
    8.0 * sum_terms(window, |n, l| l * l * l / (n * n.sqrt()))
}

/// `Σ E|X_n|³ / B_P³` with `B_P = sqrt(variance_exact)`.
pub fn lyapunov_ratio(window: &EvalWindow) -> f64 {
    third_moment_sum(window) / variance_exact(window).powf(1.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: f64) -> EvalWindow {
        EvalWindow::for_truncation(p).unwrap()
    }

    #[test]
    fn small_truncation_values() {
        let ln2 = 2f64.ln();
        // single term
        assert!((variance_exact(&w(2.0)) - 2.0 * ln2 * ln2).abs() < 1e-15);
        assert!((variance_exact(&w(2.0)) - 0.960_906).abs() < 1e-6);
        // three terms, summed by hand
        let ln4 = 4f64.ln();
        let by_hand = 2.0 * (ln4 * ln4 + 0.5 * ln2 * ln2 + (4f64 / 3.0).ln().powi(2) / 3.0);
        assert!((variance_exact(&w(4.0)) - by_hand).abs() < 1e-14);
        assert!((variance_exact(&w(4.0)) - 4.379_25).abs() < 1e-5);
    }

    #[test]
    fn asymptotic_values() {
        assert!((variance_asymptotic(&w(std::f64::consts::E)) - 2.0 / 3.0).abs() < 1e-14);
        assert!((variance_asymptotic(&w(10f64.exp())) - 2000.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn abs_cos_cubed_constant() {
        let q = crate::quad::integrate(&|x: f64| x.cos().abs().powi(3), -PI, PI, 1e-14, 40).unwrap();
        assert!((q.value / (2.0 * PI) - MEAN_ABS_COS_CUBED).abs() < 1e-12);
    }

    #[test]
    fn third_moment_values() {
        let ln2 = 2f64.ln();
        let single = 32.0 / (3.0 * PI) * ln2.powi(3);
        assert!((third_moment_sum(&w(2.0)) - single).abs() < 1e-15);
        assert!((single - 1.130_720_416_757_254_8).abs() < 1e-14);
        assert!((lyapunov_ratio(&w(2.0)) - 1.200_421_754_876_141_4).abs() < 1e-12);
    }

    #[test]
    fn exact_below_crude_bound_and_zeta_cap() {
        let zeta_three_halves = 2.612_375_348_685_488_3;
        for p in [3.0, 10.0, 100.0, 1e4] {
            let win = w(p);
            assert!(third_moment_sum(&win) < third_moment_bound(&win));
            let cap = 8.0 * zeta_three_halves * win.log_truncation().powi(3);
            assert!(third_moment_sum(&win) < cap);
        }
    }
}
