use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::series::RiemannSeries;
use super::theta::theta_prime;
use super::window::EvalWindow;
use crate::error::Result;

/// Bisection target width for located points.
pub const BISECTION_WIDTH: f64 = 1e-10;
/// Bound on `|Z|` at a located zero.
pub const ZERO_TOLERANCE: f64 = 1e-6;
/// Bound on `|Z₁|` at a located extremum.
pub const DERIV_TOLERANCE: f64 = 1e-6;
/// Number of step halvings tried on a suspicious gap.
pub const MAX_REFINEMENTS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    ZeroOfZ,
    ExtremumOfZ,
}

/// A sign change of `z_main` (zero) or of `z1` (extremum).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: f64,
    pub kind: CriticalKind,
    /// `z_main` at `location`.
    pub value_at: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanWarning {
    pub from: f64,
    pub to: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalScan {
    /// Sorted strictly increasing by location.
    pub points: Vec<CriticalPoint>,
    pub warnings: Vec<ScanWarning>,
    /// Initial scan step.
    pub step: f64,
}

impl CriticalScan {
    pub fn zeros(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|p| p.kind == CriticalKind::ZeroOfZ)
    }

    pub fn extrema(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|p| p.kind == CriticalKind::ExtremumOfZ)
    }
}

/// Scan parameters. The step is `step_factor · π / (2ϑ'(T))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub step_factor: f64,
    pub max_refinements: u32,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { step_factor: 1.0, max_refinements: MAX_REFINEMENTS }
    }
}

/// Default scan step `π / (2ϑ'(T))`, a quarter of the mean oscillation period.
pub fn scan_step(window: &EvalWindow) -> f64 {
    PI / (2.0 * theta_prime(window.start()))
}

/// All zeros and extrema of the main sums in `window`.
pub fn locate_critical_points(window: &EvalWindow) -> Result<CriticalScan> {
    Ok(locate_with(&RiemannSeries::new(window), &ScanOptions::default()))
}

pub fn locate_with(series: &RiemannSeries, options: &ScanOptions) -> CriticalScan {
    let window = series.window();
    let step = options.step_factor * scan_step(window);
    let mut points = scan_interval(series, window.start(), window.end(), step);
    let mut warnings = Vec::new();

    // Rescan gaps that break the zero/extremum alternation at successively
    // halved steps.
    for level in 1..=options.max_refinements {
        let fine = step / f64::from(1u32 << level);
        let gaps = same_kind_gaps(&points);
        if gaps.is_empty() {
            break;
        }
        let mut added = Vec::new();
        for (lo, hi) in gaps {
            let pad = 1e-7_f64.min(0.25 * (hi - lo));
            added.extend(scan_interval(series, lo + pad, hi - pad, fine));
        }
        points.extend(added);
        sort_dedup(&mut points);
    }
    for (lo, hi) in same_kind_gaps(&points) {
        let message = if hi - lo < step {
            format!("two points of the same kind closer than the scan step {step}; a point may be missing")
        } else {
            "points of the same kind adjacent after refinement".to_string()
        };
        warnings.push(ScanWarning { from: lo, to: hi, message });
    }
    CriticalScan { points, warnings, step }
}

fn same_kind_gaps(points: &[CriticalPoint]) -> Vec<(f64, f64)> {
    points
        .windows(2)
        .filter(|p| p[0].kind == p[1].kind)
        .map(|p| (p[0].location, p[1].location))
        .collect()
}

fn sort_dedup(points: &mut Vec<CriticalPoint>) {
    points.sort_by(|a, b| a.location.total_cmp(&b.location));
    points.dedup_by(|b, a| a.kind == b.kind && (b.location - a.location).abs() < 1e-9);
}

/// Sign-change scan of both sums on `[lo, hi]` with the given step; each
/// bracket is refined by bisection.
fn scan_interval(series: &RiemannSeries, lo: f64, hi: f64, step: f64) -> Vec<CriticalPoint> {
    if !(hi > lo) {
        return Vec::new();
    }
    let steps = ((hi - lo) / step).ceil().max(1.0) as usize;
    let width = (hi - lo) / steps as f64;
    let grid: Vec<(f64, f64, f64)> = (0..=steps)
        .into_par_iter()
        .map(|i| {
            let t = if i == steps { hi } else { lo + width * i as f64 };
            let (z, z1) = series.both_unchecked(t);
            (t, z, z1)
        })
        .collect();
    let mut points: Vec<CriticalPoint> = grid
        .par_windows(2)
        .flat_map_iter(|pair| {
            let (a, za, da) = pair[0];
            let (b, zb, db) = pair[1];
            let mut out = Vec::with_capacity(2);
            if changes_sign(za, zb) {
                let t = bisect(|t| series.z_main_unchecked(t), a, b, za);
                out.push(CriticalPoint { location: t, kind: CriticalKind::ZeroOfZ, value_at: series.z_main_unchecked(t) });
            }
            if changes_sign(da, db) {
                let t = bisect(|t| series.z1_unchecked(t), a, b, da);
                out.push(CriticalPoint {
                    location: t,
                    kind: CriticalKind::ExtremumOfZ,
                    value_at: series.z_main_unchecked(t),
                });
            }
            out
        })
        .collect();
    sort_dedup(&mut points);
    points
}

/// A sign change strictly across the bracket. An exact zero at the left
/// end counts, at the right end it is left to the next bracket.
fn changes_sign(left: f64, right: f64) -> bool {
    (left < 0.0 && right > 0.0) || (left > 0.0 && right < 0.0) || (left == 0.0 && right != 0.0)
}

/// Bisection until the bracket is at most [`BISECTION_WIDTH`] wide or no
/// representable midpoint remains.
fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, fa: f64) -> f64 {
    if fa == 0.0 {
        return a;
    }
    let left_negative = fa < 0.0;
    while b - a > BISECTION_WIDTH {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == left_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_finds_simple_root() {
        let r = bisect(|x: f64| x * x - 2.0, 1.0, 2.0, -1.0);
        assert!((r - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn bisection_stops_at_ulp_scale() {
        // Around 1e6 the spacing of f64 is ~1.2e-10, so the loop must stop on
        // the representability check.
        let root = 1.0e6 + 0.123_456_789;
        let r = bisect(|x: f64| x - root, 1.0e6, 1.0e6 + 1.0, -1.0);
        assert!((r - root).abs() < 3e-10);
    }

    #[test]
    fn tiny_window_without_sign_change_is_empty() {
        let w = EvalWindow::new(1.0e6, 1e-6).unwrap();
        let series = RiemannSeries::new(&w);
        let (z0, d0) = series.both_unchecked(w.start());
        let (z1, d1) = series.both_unchecked(w.end());
        let scan = locate_critical_points(&w).unwrap();
        if !changes_sign(z0, z1) && !changes_sign(d0, d1) {
            assert!(scan.points.is_empty());
        }
    }

    #[test]
    fn points_sorted_and_tolerances_met() {
        let w = EvalWindow::new(1.0e4, 20.0).unwrap();
        let series = RiemannSeries::new(&w);
        let scan = locate_critical_points(&w).unwrap();
        assert!(!scan.points.is_empty());
        assert!(scan.points.windows(2).all(|p| p[0].location < p[1].location));
        for p in &scan.points {
            assert!(w.contains(p.location));
            match p.kind {
                CriticalKind::ZeroOfZ => assert!(p.value_at.abs() <= ZERO_TOLERANCE),
                CriticalKind::ExtremumOfZ => {
                    assert!(series.z1_unchecked(p.location).abs() <= DERIV_TOLERANCE);
                    let h = 1e-6;
                    let before = series.z1_unchecked(p.location - h);
                    let after = series.z1_unchecked(p.location + h);
                    assert!(before * after < 0.0);
                }
            }
        }
    }
}
