//! Random-phase model of `Z'(t)`: independent uniform phases `φ_n` are
//! injected into the main sum, giving the process `Φ₁`, and its arc-length
//! functional `Φ₂ = ∫ sqrt(1 + Φ₁²) dt`.
//!
//! All Monte Carlo routines derive phases from `(master_seed, sample index,
//! term index)` and reduce in fixed index order, so results are bit-identical
//! for any number of worker threads.

mod ks;
mod moments;
mod montecarlo;
mod phases;
mod process;

pub use ks::{
    distribution_check, distribution_check_against, ks_distance, normal_cdf, KS_MIN_SAMPLES, KS_THRESHOLD,
};
pub use moments::{
    lyapunov_ratio, third_moment_bound, third_moment_sum, variance_asymptotic, variance_exact, MEAN_ABS_COS_CUBED,
};
pub use montecarlo::{
    mc_moments, phi1_samples, phi2_mc, phi2_mc_with, variance_std_error, McEstimate, Phi2Estimate,
    MAX_FAILURE_FRACTION,
};
pub use phases::{sample_phases, McConfig, PhaseSample, SeedPath, DEFAULT_BATCH_SIZE};
pub use process::{phi1, PhaseProcess};
