//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Each subinterval is accepted once `|K15 - G7|` falls below its share of
//! the absolute tolerance. The reported error is the sum of those raw
//! differences, which overestimates the true error for smooth integrands.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const DEFAULT_MAX_DEPTH: u32 = 40;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub intervals: usize,
}

impl Quadrature {
    fn zero() -> Self {
        Self { value: 0.0, error: 0.0, evaluations: 0, intervals: 0 }
    }

    fn merge(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error: self.error + other.error,
            evaluations: self.evaluations + other.evaluations,
            intervals: self.intervals + other.intervals,
        }
    }
}

/// One 15-point Kronrod rule on `[a, b]`: `(K15, |K15 - G7|)`.
pub fn gauss_kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// On non-convergence the error carries the partial sum and the error
/// actually achieved.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, max_depth: u32) -> Result<Quadrature> {
    let (q, converged) = integrate_partial(f, a, b, abs_tol, max_depth);
    if converged {
        Ok(q)
    } else {
        Err(Error::QuadratureNonConvergence { partial: q.value, achieved: q.error })
    }
}

/// Like [`integrate`] but always returns the estimate with a convergence flag.
pub fn integrate_partial<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
) -> (Quadrature, bool) {
    let mut converged = true;
    let q = refine(f, a, b, abs_tol, max_depth, &mut converged);
    (q, converged)
}

fn refine<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32, converged: &mut bool) -> Quadrature {
    let (value, error) = gauss_kronrod15(f, a, b);
    let mid = 0.5 * (a + b);
    if error <= tol || !error.is_finite() {
        if !error.is_finite() {
            *converged = false;
        }
        return Quadrature { value, error, evaluations: 15, intervals: 1 };
    }
    if depth == 0 || mid <= a || mid >= b {
        *converged = false;
        return Quadrature { value, error, evaluations: 15, intervals: 1 };
    }
    let left = refine(f, a, mid, 0.5 * tol, depth - 1, converged);
    let right = refine(f, mid, b, 0.5 * tol, depth - 1, converged);
    let mut q = left.merge(right);
    q.evaluations += 15;
    q
}

/// Splits `[a, b]` into equal panels no wider than `max_width`, integrates
/// each adaptively in parallel with tolerance proportional to its width,
/// and sums the panels in index order, so the result does not depend on
/// the number of worker threads.
pub fn integrate_panels<F: Fn(f64) -> f64 + Sync>(
    f: &F,
    a: f64,
    b: f64,
    max_width: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<Quadrature> {
    let (q, converged) = integrate_panels_partial(f, a, b, max_width, abs_tol, max_depth);
    if converged {
        Ok(q)
    } else {
        Err(Error::QuadratureNonConvergence { partial: q.value, achieved: q.error })
    }
}

pub fn integrate_panels_partial<F: Fn(f64) -> f64 + Sync>(
    f: &F,
    a: f64,
    b: f64,
    max_width: f64,
    abs_tol: f64,
    max_depth: u32,
) -> (Quadrature, bool) {
    let panels = panel_count(b - a, max_width);
    let width = (b - a) / panels as f64;
    let per_panel_tol = abs_tol / panels as f64;
    let parts: Vec<(Quadrature, bool)> = (0..panels)
        .into_par_iter()
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == panels { b } else { a + width * (i + 1) as f64 };
            integrate_partial(f, lo, hi, per_panel_tol, max_depth)
        })
        .collect();
    parts
        .into_iter()
        .fold((Quadrature::zero(), true), |(acc, ok), (q, c)| (acc.merge(q), ok && c))
}

fn panel_count(span: f64, max_width: f64) -> usize {
    if !(max_width > 0.0) || !(span > 0.0) {
        return 1;
    }
    ((span / max_width).ceil() as usize).max(1)
}
