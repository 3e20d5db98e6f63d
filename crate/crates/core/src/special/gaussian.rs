//! The Gaussian expectation chain for the statistical arc length.
//!
//! With `β = 3/(4 ln³P)` the model density of the random-phase process at a
//! fixed `t` is the normalized Gaussian `w(x) = sqrt(β/π) exp(-βx²)`, whose
//! variance `1/(2β) = (2/3) ln³P` is the asymptotic variance of the process.
//! (Written as `½ ln^{-3/2}P · exp(-βx²)` the prefactor would integrate to
//! `sqrt(π/3) ≈ 1.023` rather than 1 and disagree with the closed form below
//! by that factor; the normalized density is the one that makes the chain
//! consistent.)
//!
//! * `F(β) = ∫_0^∞ sqrt(1 + x²) exp(-βx²) dx = ¼ e^{β/2} (K₀(β/2) + K₁(β/2))`
//! * `E∞ sqrt(1 + Φ₁²) = 2 sqrt(β/π) F(β) = sqrt(3/π) ln^{-3/2}P · F(β)`
//! * `E∞(Φ₂) = U · E∞ sqrt(1 + Φ₁²)`, the statistical arc length
//! * asymptotically `U ln^{3/2}T / sqrt(6π)`

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::bessel::{bessel_k0_with, bessel_k1_with, BesselOptions};
use crate::error::{Error, Result};
use crate::quad::{integrate_partial, DEFAULT_MAX_DEPTH};
use crate::riemann::EvalWindow;

/// `β = 3 / (4 ln³P)`.
pub fn beta_for(window: &EvalWindow) -> f64 {
    beta_from_log(window.log_truncation())
}

pub fn beta_from_log(log_p: f64) -> f64 {
    0.75 / log_p.powi(3)
}

/// Normalized model density `sqrt(β/π) exp(-βx²)`.
pub fn gaussian_density(x: f64, beta: f64) -> f64 {
    (beta / PI).sqrt() * (-beta * x * x).exp()
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "F(β) needs β > 0", value: beta })
    }
}

/// Direct quadrature of `F(β)` after scaling `x = u / sqrt(β)`:
/// `F = β^{-1/2} ∫_0^8 sqrt(1 + u²/β) exp(-u²) du` (the tail past `u = 8`
/// is below `e^{-64}` relative).
pub fn f_of_beta_quad(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let root = beta.sqrt();
    let integrand = |u: f64| (1.0 + u * u / beta).sqrt() * (-u * u).exp();
    // Inner integral is ≈ max(√π/2, 1/(2√β)); aim for ~1e-13 relative.
    let scale = 0.9 + 0.5 / root;
    let (q, converged) = integrate_partial(&integrand, 0.0, 8.0, 1e-13 * scale, DEFAULT_MAX_DEPTH);
    if !converged {
        return Err(Error::QuadratureNonConvergence { partial: q.value / root, achieved: q.error / root });
    }
    Ok(q.value / root)
}

/// `F(β) = ¼ e^{β/2} (K₀(β/2) + K₁(β/2))`.
pub fn f_of_beta_closed(beta: f64) -> Result<f64> {
    f_of_beta_closed_with(beta, &BesselOptions::default())
}

pub fn f_of_beta_closed_with(beta: f64, options: &BesselOptions) -> Result<f64> {
    check_beta(beta)?;
    let z = 0.5 * beta;
    let k0 = bessel_k0_with(z, options)?.value;
    let k1 = bessel_k1_with(z, options)?.value;
    Ok(0.25 * z.exp() * (k0 + k1))
}

/// `E∞ sqrt(1 + Φ₁²)` under the model density.
pub fn e_inf_point(window: &EvalWindow) -> Result<f64> {
    e_inf_point_with(window, &BesselOptions::default())
}

pub fn e_inf_point_with(window: &EvalWindow, options: &BesselOptions) -> Result<f64> {
    let log_p = window.log_truncation();
    if !(log_p > 1.0) {
        return Err(Error::Domain { what: "E∞ needs P > e", value: window.truncation() });
    }
    let beta = beta_from_log(log_p);
    Ok((3.0 / PI).sqrt() / log_p.powf(1.5) * f_of_beta_closed_with(beta, options)?)
}

/// `E∞(Φ₂) = U · E∞ sqrt(1 + Φ₁²)`: the statistical arc length of the window.
pub fn e_inf_phi2(window: &EvalWindow) -> Result<f64> {
    Ok(window.length() * e_inf_point(window)?)
}

/// `U ln^{3/2}T / sqrt(6π)`.
///
/// Only `T > 1` and `0 < U <= sqrt(T)` are required here; the `T_min`
/// guard belongs to windows, not to this closed-form expression.
pub fn theorem_asymptotic(start: f64, length: f64) -> Result<f64> {
    if !(start > 1.0 && start.is_finite()) {
        return Err(Error::Domain { what: "theorem asymptotic needs T > 1", value: start });
    }
    if !(length > 0.0 && length <= start.sqrt()) {
        return Err(Error::Domain { what: "theorem asymptotic needs 0 < U <= sqrt(T)", value: length });
    }
    Ok(length * start.ln().powf(1.5) / (6.0 * PI).sqrt())
}

/// Same as [`theorem_asymptotic`] for `T` given by its logarithm.
pub fn theorem_asymptotic_log(log_start: f64, length: f64) -> f64 {
    length * log_start.powf(1.5) / (6.0 * PI).sqrt()
}

/// `ln^{3/2}P` via the asymptotic `ln^{3/2}T / (2√2)`, for comparison with
/// the exact `ln P = (ln T - ln 2π)/2` carried by windows.
pub fn log32_truncation_asymptotic(log_start: f64) -> f64 {
    log_start.powf(1.5) / (2.0 * std::f64::consts::SQRT_2)
}

/// `ln P = (ln T - ln 2π)/2`.
pub fn log_truncation_exact(log_start: f64) -> f64 {
    0.5 * (log_start - TAU.ln())
}

/// Closed-form, quadrature and asymptotic values for one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub window: EvalWindow,
    pub beta: f64,
    pub f_closed: f64,
    pub f_quad: f64,
    pub e_inf_point: f64,
    pub e_inf_arc: f64,
    pub theorem_asymptotic: f64,
}

impl PredictionReport {
    /// `e_inf_arc / theorem_asymptotic`.
    pub fn theorem_ratio(&self) -> f64 {
        self.e_inf_arc / self.theorem_asymptotic
    }
}

pub fn predict(window: &EvalWindow) -> Result<PredictionReport> {
    predict_with(window, &BesselOptions::default())
}

pub fn predict_with(window: &EvalWindow, options: &BesselOptions) -> Result<PredictionReport> {
    let beta = beta_for(window);
    let f_closed = f_of_beta_closed_with(beta, options)?;
    let f_quad = f_of_beta_quad(beta)?;
    let e_point = e_inf_point_with(window, options)?;
    let log_start = window.start().ln();
    Ok(PredictionReport {
        window: *window,
        beta,
        f_closed,
        f_quad,
        e_inf_point: e_point,
        e_inf_arc: window.length() * e_point,
        theorem_asymptotic: theorem_asymptotic_log(log_start, window.length()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    /// Plain midpoint sum of `sqrt(1+x²) e^{-βx²}` on `[0, X]`.
    fn riemann_sum_oracle(beta: f64, upper: f64, steps: usize) -> f64 {
        let h = upper / steps as f64;
        (0..steps)
            .map(|i| {
                let x = (i as f64 + 0.5) * h;
                (1.0 + x * x).sqrt() * (-beta * x * x).exp()
            })
            .sum::<f64>()
            * h
    }

    #[test]
    fn f_at_one_matches_riemann_sum() {
        let oracle = riemann_sum_oracle(1.0, 12.0, 400_000);
        assert!((f_of_beta_quad(1.0).unwrap() - oracle).abs() < 1e-6);
        // mpmath, 40 digits
        assert!((f_of_beta_quad(1.0).unwrap() - 1.063_779_773_496_423_8).abs() < 1e-13);
    }

    #[test]
    fn closed_form_identity() {
        for beta in [1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001] {
            let q = f_of_beta_quad(beta).unwrap();
            let c = f_of_beta_closed(beta).unwrap();
            assert!((c - q).abs() / q <= 1e-8, "β = {beta}: {c} vs {q}");
        }
    }

    #[test]
    fn f_lower_bound_and_small_beta_limit() {
        for beta in [2.0, 0.5, 0.05] {
            assert!(f_of_beta_quad(beta).unwrap() > 0.5 * (PI / beta).sqrt());
        }
        let beta = 1e-4;
        assert!((f_of_beta_quad(beta).unwrap() * 2.0 * beta - 1.0).abs() < 1e-3);
    }

    #[test]
    fn f_near_two_thirds_log_cubed() {
        let beta = beta_from_log(10.0);
        let f = f_of_beta_closed(beta).unwrap();
        assert!((f - 2000.0 / 3.0).abs() <= 10.0 * 10f64.ln());
    }

    #[test]
    fn density_is_normalized() {
        let beta = beta_from_log(4.0);
        let width = 12.0 / beta.sqrt();
        let mass = integrate(&|x| gaussian_density(x, beta), -width, width, 1e-13, 40).unwrap().value;
        assert!((mass - 1.0).abs() < 1e-10);
    }

    #[test]
    fn e_inf_point_matches_density_quadrature() {
        let w = EvalWindow::new(1.0e6, 1.0).unwrap();
        let beta = beta_for(&w);
        let width = 12.0 / beta.sqrt();
        let oracle = integrate(&|x: f64| x.hypot(1.0) * gaussian_density(x, beta), -width, width, 1e-12, 40)
            .unwrap()
            .value;
        assert!((e_inf_point(&w).unwrap() - oracle).abs() < 1e-8);
    }

    #[test]
    fn theorem_values() {
        let c = 1.0 / (6.0 * PI).sqrt();
        assert!((theorem_asymptotic(std::f64::consts::E, 1.0).unwrap() - c).abs() < 1e-15);
        assert!((theorem_asymptotic(4f64.exp(), 1.0).unwrap() - 8.0 * c).abs() < 1e-14);
        let t = 1.0e6;
        assert_eq!(theorem_asymptotic(t, 2.0).unwrap(), 2.0 * theorem_asymptotic(t, 1.0).unwrap());
        assert!(theorem_asymptotic(1.0, 1.0).is_err());
        assert!(theorem_asymptotic(100.0, 10.5).is_err());
    }

    #[test]
    fn e_inf_phi2_linear_in_length() {
        let a = EvalWindow::new(1.0e6, 1.0).unwrap();
        let b = EvalWindow::new(1.0e6, 2.0).unwrap();
        let tiny = EvalWindow::new(1.0e6, 1e-12).unwrap();
        assert!((e_inf_phi2(&b).unwrap() - 2.0 * e_inf_phi2(&a).unwrap()).abs() < 1e-12);
        assert!(e_inf_phi2(&tiny).unwrap() < 1e-10);
    }
}
