//! Deterministic evaluators for the Hardy function `Z(t)` and its derivative
//! through truncated Riemann–Siegel main sums, critical-point location, and
//! the numeric arc length of the `Z(t)`-curve.

mod arclength;
mod critical;
mod series;
mod theta;
mod window;

pub use arclength::{arc_length_numeric, arc_length_with, arc_length_with_scan, extrema_sum, panel_width, ArcLengthOptions, ArcLengthReport};
pub use critical::{
    locate_critical_points, locate_with, scan_step, CriticalKind, CriticalPoint, CriticalScan, ScanOptions,
    ScanWarning, BISECTION_WIDTH, DERIV_TOLERANCE, MAX_REFINEMENTS, ZERO_TOLERANCE,
};
pub use series::{z1, z_main, RiemannSeries, RiemannSeriesTerm};
pub use theta::{theta, theta_prime};
pub use window::{EvalWindow, DEFAULT_T_MIN};

pub(crate) use arclength::integrate_window;
