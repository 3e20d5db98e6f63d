#![allow(clippy::excessive_precision)]

use std::f64::consts::{PI, TAU};

use zeta_arclen::riemann::EvalWindow;
use zeta_arclen::special::{
    beta_from_log, bessel_i0, bessel_k0, bessel_k0_series, bessel_k1, bessel_k1_series, bessel_k_schlafli,
    e_inf_point, f_of_beta_closed, f_of_beta_quad, log32_truncation_asymptotic, log_truncation_exact, predict,
    BesselMethod, BesselOptions,
};

#[test]
fn closed_form_matches_quadrature_suite() {
    for beta in [1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001] {
        let quad = f_of_beta_quad(beta).unwrap();
        let closed = f_of_beta_closed(beta).unwrap();
        assert!((closed - quad).abs() / quad <= 1e-8, "β = {beta}");
    }
}

#[test]
fn small_argument_bessel_limits() {
    let mut prev_k1 = f64::INFINITY;
    let mut prev_k0 = f64::INFINITY;
    for k in 1..=4 {
        let z = 10f64.powi(-k);
        let k1_gap = (z * bessel_k1(z).unwrap().value - 1.0).abs();
        let k0_gap = (bessel_k0(z).unwrap().value / -z.ln() - 1.0).abs();
        assert!(k1_gap < prev_k1 && k0_gap < prev_k0, "z = {z}");
        prev_k1 = k1_gap;
        prev_k0 = k0_gap;
    }
    assert!(prev_k1 < 1e-6);
}

#[test]
fn series_and_schlafli_agree_across_overlap() {
    let options = BesselOptions::default();
    for i in 0..=19 {
        let z = 0.1 + 0.1 * i as f64;
        let s0 = bessel_k0_series(z, &options).unwrap();
        let q0 = bessel_k_schlafli(0, z).unwrap();
        let s1 = bessel_k1_series(z, &options).unwrap();
        let q1 = bessel_k_schlafli(1, z).unwrap();
        assert!((s0.value - q0.value).abs() <= 1e-9 * q0.value, "K0({z})");
        assert!((s1.value - q1.value).abs() <= 1e-9 * q1.value, "K1({z})");
        assert!(s0.est_error >= 0.0 && q0.est_error >= 0.0);
    }
    assert_eq!(bessel_k0(8.0).unwrap().method, BesselMethod::SchlafliQuadrature);
    // mpmath: K0(8) = 1.4647070522281538e-4
    assert!((bessel_k0(8.0).unwrap().value / 1.464_707_052_228_153_8e-4 - 1.0).abs() < 1e-10);
}

#[test]
fn i0_at_model_argument() {
    for log_p in [5.0, 10.0, 20.0] {
        let beta = beta_from_log(log_p);
        let gap = bessel_i0(beta / 2.0) - 1.0;
        assert!(gap > 0.0 && gap <= 1.0 / log_p.powi(6));
    }
}

#[test]
fn point_expectation_over_log_p_power() {
    // ln P = 50 directly.
    let w = EvalWindow::with_truncation(1.0e6, 1.0, 50f64.exp()).unwrap();
    let ratio = e_inf_point(&w).unwrap() / 50f64.powf(1.5);
    assert!((ratio - 2.0 / (3.0 * PI).sqrt()).abs() < 1e-3);
}

#[test]
fn log_t_constant_follows_exact_conversion() {
    // With ln P = (ln T - ln 2π)/2 the ratio to ln^{3/2}T/√(6π) is
    // (1 - ln 2π / ln T)^{3/2} up to the O(ln ln P / ln³P) part of F.
    // Reference ratios from mpmath besselk at 40 digits.
    let reference = [0.869_153_725_588_941_4, 0.945_669_036_795_212_5, 0.972_601_399_695_622_8, 0.986_253_677_248_843];
    let mut prev_gap = f64::INFINITY;
    for (log_t, expected) in [20.0, 50.0, 100.0, 200.0].into_iter().zip(reference) {
        let w = EvalWindow::new(f64::exp(log_t), 1.0).unwrap();
        let ratio = e_inf_point(&w).unwrap() * (6.0 * PI).sqrt() / f64::powf(log_t, 1.5);
        let leading = (1.0 - TAU.ln() / log_t).powf(1.5);
        assert!((ratio - expected).abs() < 1e-12, "ln T = {log_t}: {ratio} vs {expected}");
        assert!((ratio - leading).abs() < 5e-3 * leading, "ln T = {log_t}: {ratio} vs {leading}");
        assert!((1.0 - ratio).abs() < prev_gap);
        prev_gap = (1.0 - ratio).abs();
        let exact_log_p = log_truncation_exact(log_t);
        assert!((w.log_truncation() - exact_log_p).abs() < 1e-12);
        assert!(log32_truncation_asymptotic(log_t) > exact_log_p.powf(1.5));
    }
}

#[test]
fn prediction_report_is_consistent() {
    let w = EvalWindow::new(1.0e6, 2.0).unwrap();
    let r = predict(&w).unwrap();
    assert!(r.beta > 0.0 && r.f_closed > 0.0 && r.f_quad > 0.0);
    assert!((r.f_closed - r.f_quad).abs() / r.f_quad <= 1e-8);
    assert!((r.e_inf_arc - w.length() * r.e_inf_point).abs() <= 1e-12 * r.e_inf_arc);
    assert!(r.theorem_ratio() > 0.5 && r.theorem_ratio() < 1.5);
}
