use serde::{Deserialize, Serialize};

use super::critical::{locate_with, CriticalKind, CriticalPoint, CriticalScan, ScanOptions, ScanWarning};
use super::series::RiemannSeries;
use super::theta::theta_prime;
use super::window::EvalWindow;
use crate::error::{Error, Result};
use crate::quad::{integrate_panels_partial, Quadrature, DEFAULT_MAX_DEPTH};

/// Quadrature and scan settings for [`arc_length_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcLengthOptions {
    /// Absolute tolerance per unit of window length (total tolerance is `rel_tol · U`).
    pub rel_tol: f64,
    /// Panel width is at most `panel_factor / ϑ'(T)`.
    pub panel_factor: f64,
    pub max_depth: u32,
    pub scan: ScanOptions,
    /// Test hook: integrate with every series amplitude set to zero.
    pub zero_series: bool,
}

impl Default for ArcLengthOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            panel_factor: 0.5,
            max_depth: DEFAULT_MAX_DEPTH,
            scan: ScanOptions::default(),
            zero_series: false,
        }
    }
}

/// Numeric arc length of the `Z₁`-curve over one window, next to the
/// extrema sum `2 Σ |Z(t₀)|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcLengthReport {
    pub window: EvalWindow,
    pub l_numeric: f64,
    pub extrema_sum: f64,
    /// `l_numeric - extrema_sum`.
    pub residual: f64,
    pub quad_error_estimate: f64,
    pub quad_evaluations: usize,
    pub critical_points: Vec<CriticalPoint>,
    pub scan_warnings: Vec<ScanWarning>,
}

impl ArcLengthReport {
    /// `residual / U`, the observable stand-in for the `Θ` of the extrema-sum formula.
    pub fn theta_proxy(&self) -> f64 {
        self.residual / self.window.length()
    }

    pub fn zero_count(&self) -> usize {
        self.critical_points.iter().filter(|p| p.kind == CriticalKind::ZeroOfZ).count()
    }

    pub fn extremum_count(&self) -> usize {
        self.critical_points.iter().filter(|p| p.kind == CriticalKind::ExtremumOfZ).count()
    }
}

/// Panel width bound `c / ϑ'(T)`.
pub fn panel_width(window: &EvalWindow, panel_factor: f64) -> f64 {
    panel_factor / theta_prime(window.start())
}

/// `∫_T^{T+U} sqrt(1 + Z₁(t)²) dt` with the default options.
pub fn arc_length_numeric(window: &EvalWindow) -> Result<ArcLengthReport> {
    arc_length_with(window, &ArcLengthOptions::default())
}

pub fn arc_length_with(window: &EvalWindow, options: &ArcLengthOptions) -> Result<ArcLengthReport> {
    let series = series_for(window, options);
    let scan = locate_with(&series, &options.scan);
    report_from(&series, options, scan)
}

/// Arc length with a critical-point scan computed earlier (for example read
/// from a cache). The scan must belong to the same window and options.
pub fn arc_length_with_scan(
    window: &EvalWindow,
    options: &ArcLengthOptions,
    scan: CriticalScan,
) -> Result<ArcLengthReport> {
    report_from(&series_for(window, options), options, scan)
}

fn series_for(window: &EvalWindow, options: &ArcLengthOptions) -> RiemannSeries {
    if options.zero_series {
        RiemannSeries::zeroed(window)
    } else {
        RiemannSeries::new(window)
    }
}

fn report_from(series: &RiemannSeries, options: &ArcLengthOptions, scan: CriticalScan) -> Result<ArcLengthReport> {
    let window = series.window();
    let quad = arc_length_integral(series, options)?;
    debug_assert!(quad.value >= window.length() * (1.0 - 1e-12));
    let extrema = sum_abs_extrema(&scan);
    Ok(ArcLengthReport {
        window: *window,
        l_numeric: quad.value,
        extrema_sum: extrema,
        residual: quad.value - extrema,
        quad_error_estimate: quad.error,
        quad_evaluations: quad.evaluations,
        critical_points: scan.points,
        scan_warnings: scan.warnings,
    })
}

pub(crate) fn arc_length_integral(series: &RiemannSeries, options: &ArcLengthOptions) -> Result<Quadrature> {
    let window = series.window();
    let integrand = |t: f64| series.z1_unchecked(t).hypot(1.0);
    integrate_window(&integrand, window, options)
}

/// Integrates `f` over the window on oscillation-sized panels.
pub(crate) fn integrate_window<F: Fn(f64) -> f64 + Sync>(
    f: &F,
    window: &EvalWindow,
    options: &ArcLengthOptions,
) -> Result<Quadrature> {
    if !(options.rel_tol > 0.0 && options.panel_factor > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "quadrature tolerance and panel factor must be positive, got {} and {}",
            options.rel_tol, options.panel_factor
        )));
    }
    let (quad, converged) = integrate_panels_partial(
        f,
        window.start(),
        window.end(),
        panel_width(window, options.panel_factor),
        options.rel_tol * window.length(),
        options.max_depth,
    );
    if converged {
        Ok(quad)
    } else {
        Err(Error::QuadratureNonConvergence { partial: quad.value, achieved: quad.error })
    }
}

fn sum_abs_extrema(scan: &CriticalScan) -> f64 {
    2.0 * scan.extrema().map(|p| p.value_at.abs()).sum::<f64>()
}

/// `2 Σ |Z(t₀)|` over the extrema located in the window.
pub fn extrema_sum(window: &EvalWindow) -> Result<f64> {
    let series = RiemannSeries::new(window);
    Ok(sum_abs_extrema(&locate_with(&series, &ScanOptions::default())))
}
