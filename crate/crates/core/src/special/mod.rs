//! Special functions and the closed-form statistical arc length.

mod bessel;
mod digamma;
mod gaussian;

pub use bessel::{
    bessel_i0, bessel_i1, bessel_k0, bessel_k0_series, bessel_k0_with, bessel_k1, bessel_k1_series, bessel_k1_with,
    bessel_k_schlafli, BesselEval, BesselMethod, BesselOptions,
};
pub use digamma::{digamma, EULER_GAMMA};
pub use gaussian::{
    beta_for, beta_from_log, e_inf_phi2, e_inf_point, e_inf_point_with, f_of_beta_closed, f_of_beta_closed_with,
    f_of_beta_quad, gaussian_density, log32_truncation_asymptotic, log_truncation_exact, predict, predict_with,
    theorem_asymptotic, theorem_asymptotic_log, PredictionReport,
};
