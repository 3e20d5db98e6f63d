//! The computational subcommands. Each takes a validated [`RunConfig`] and
//! returns a [`ResultRecord`]; writing it out is left to the caller.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use chrono::{SecondsFormat, Utc};
use rayon::prelude::*;
use zeta_arclen::riemann::{
    arc_length_with, arc_length_with_scan, locate_with, theta, ArcLengthOptions, ArcLengthReport, CriticalKind,
    EvalWindow, RiemannSeries,
};
use zeta_arclen::special::{
    e_inf_point_with, f_of_beta_closed_with, predict_with, theorem_asymptotic, BesselOptions, EULER_GAMMA,
};
use zeta_arclen::stochastic::{
    ks_distance, lyapunov_ratio, normal_cdf, phi1_samples, phi2_mc_with, third_moment_bound, third_moment_sum,
    variance_asymptotic, variance_exact, variance_std_error, McConfig, McEstimate, KS_MIN_SAMPLES, KS_THRESHOLD,
};

use crate::cache::ScanCache;
use crate::config::RunConfig;
use crate::error::Result;
use crate::record::{code_version, Diagnostics, Provenance, ResultRecord, Results, Table, SCHEMA_VERSION};

/// Shift applied to Euler's constant by the corruption hook.
pub const BESSEL_CORRUPTION: f64 = 1e-3;

pub fn bessel_options(config: &RunConfig) -> BesselOptions {
    let mut options = BesselOptions::default();
    if config.corrupt_bessel {
        options.euler_gamma = EULER_GAMMA + BESSEL_CORRUPTION;
    }
    options
}

pub fn arc_options(config: &RunConfig) -> ArcLengthOptions {
    ArcLengthOptions { rel_tol: config.quad_tol, zero_series: config.zero_series, ..Default::default() }
}

/// Accumulates the parts of a record while a command runs.
pub struct RecordBuilder {
    config: RunConfig,
    started_at: String,
    pub results: Results,
    pub tables: BTreeMap<String, Table>,
    pub diagnostics: Diagnostics,
    timings: BTreeMap<String, f64>,
    pub(crate) cache: Option<String>,
}

impl RecordBuilder {
    pub fn new(config: &RunConfig) -> Self {
        Self {
            config: config.clone(),
            started_at: now(),
            results: Results::default(),
            tables: BTreeMap::new(),
            diagnostics: Diagnostics::default(),
            timings: BTreeMap::new(),
            cache: None,
        }
    }

    pub fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let clock = Instant::now();
        let value = f();
        self.timings.insert(stage.to_owned(), clock.elapsed().as_secs_f64());
        value
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.diagnostics.warnings.push(message.into());
    }

    pub fn finish(self) -> ResultRecord {
        ResultRecord {
            schema_version: SCHEMA_VERSION,
            provenance: Provenance {
                seed: self.config.seed,
                code_version: code_version(),
                started_at: self.started_at,
                finished_at: now(),
                timings: self.timings,
                cache: self.cache,
            },
            config: self.config,
            results: self.results.into_inner(),
            tables: self.tables,
            diagnostics: self.diagnostics,
        }
    }
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// `t_i = T + U i/(n-1)`, or just `T` for a single point.
fn grid_points(window: &EvalWindow, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![window.start()];
    }
    let step = window.length() / (n - 1) as f64;
    (0..n).map(|i| (window.start() + step * i as f64).min(window.end())).collect()
}

/// `(t, ϑ, Z, Z')` on a uniform grid over the window.
pub fn cmd_eval(config: &RunConfig) -> Result<ResultRecord> {
    let window = config.window()?;
    let mut record = RecordBuilder::new(config);
    let series = RiemannSeries::new(&window);
    let ts = grid_points(&window, config.grid);
    let rows = record.timed("grid", || {
        ts.par_iter()
            .map(|&t| Ok(vec![t, theta(t)?, series.z_main(t)?, series.z1(t)?]))
            .collect::<zeta_arclen::Result<Vec<Vec<f64>>>>()
    })?;
    let mut table = Table::new(&["t", "theta", "z", "z1"]);
    rows.into_iter().for_each(|row| table.push(row));
    record.tables.insert("grid".into(), table);
    record.results.set("points", ts.len() as f64)?;
    record.results.set("truncation", window.truncation())?;
    record.results.set("term_count", window.term_count() as f64)?;
    Ok(record.finish())
}

/// Arc length of the window, reusing a cached critical-point scan when a
/// cache directory is configured.
fn arc_length(config: &RunConfig, window: &EvalWindow, record: &mut RecordBuilder) -> Result<ArcLengthReport> {
    let options = arc_options(config);
    if config.zero_series {
        return Ok(record.timed("arc_length", || arc_length_with(window, &options))?);
    }
    let scan = match &config.cache {
        Some(dir) => {
            let (scan, lookup) = record.timed("scan", || ScanCache::new(dir).scan(window, &options.scan))?;
            record.cache = Some(lookup.as_str().to_owned());
            scan
        }
        None => record.timed("scan", || locate_with(&RiemannSeries::new(window), &options.scan)),
    };
    Ok(record.timed("arc_length", || arc_length_with_scan(window, &options, scan))?)
}

fn record_arc_length(report: &ArcLengthReport, record: &mut RecordBuilder) -> Result<()> {
    let window = &report.window;
    let r = &mut record.results;
    r.set("l_numeric", report.l_numeric)?;
    r.set("extrema_sum", report.extrema_sum)?;
    r.set("residual", report.residual)?;
    r.set("theta_proxy", report.theta_proxy())?;
    r.flag("theta_proxy_in_unit_interval", report.theta_proxy() > 0.0 && report.theta_proxy() < 1.0);
    r.set("zero_count", report.zero_count() as f64)?;
    r.set("extremum_count", report.extremum_count() as f64)?;
    r.set("expected_zero_count", window.length() / TAU * (window.start() / TAU).ln())?;
    record.diagnostics.quadrature.insert("error_estimate".into(), report.quad_error_estimate);
    record.diagnostics.quadrature.insert("evaluations".into(), report.quad_evaluations as f64);
    for w in &report.scan_warnings {
        record.diagnostics.warnings.push(format!("critical points [{:?}, {:?}]: {}", w.from, w.to, w.message));
    }
    Ok(())
}

pub fn cmd_arclength(config: &RunConfig) -> Result<ResultRecord> {
    let window = config.window()?;
    let mut record = RecordBuilder::new(config);
    let report = arc_length(config, &window, &mut record)?;
    record_arc_length(&report, &mut record)?;
    let mut table = Table::new(&["location", "kind", "value_at"]);
    for p in &report.critical_points {
        let kind = match p.kind {
            CriticalKind::ZeroOfZ => 0.0,
            CriticalKind::ExtremumOfZ => 1.0,
        };
        table.push(vec![p.location, kind, p.value_at]);
    }
    record.tables.insert("critical_points".into(), table);
    Ok(record.finish())
}

/// Moments, distribution fit and Lyapunov diagnostics of `Φ₁`, and
/// optionally a Monte Carlo estimate of `E Φ₂`.
pub fn cmd_simulate(config: &RunConfig) -> Result<ResultRecord> {
    let window = config.window()?;
    let mut record = RecordBuilder::new(config);
    let mc = McConfig::new(config.samples, config.seed)?;
    let exact = variance_exact(&window);
    for (label, t) in [("t0", window.start()), ("tmid", window.start() + 0.5 * window.length())] {
        let values = record.timed(label, || phi1_samples(t, &window, &mc))?;
        let est = McEstimate::from_samples(&values, mc.batch_size)?;
        let var_se = variance_std_error(&values);
        let r = &mut record.results;
        r.set(&format!("{label}.t"), t)?;
        r.set(&format!("{label}.mean"), est.mean)?;
        r.set(&format!("{label}.std_error"), est.std_error)?;
        r.set(&format!("{label}.variance"), est.variance)?;
        r.set(&format!("{label}.variance_std_error"), var_se)?;
        r.set(&format!("{label}.variance_z"), (est.variance - exact) / var_se)?;
        if config.samples >= KS_MIN_SAMPLES {
            let ks = ks_distance(&values, |x| normal_cdf(x, exact));
            r.set(&format!("{label}.ks"), ks)?;
            r.flag(&format!("{label}.ks_pass"), ks <= KS_THRESHOLD);
        } else {
            record.warn(format!("{label}: KS skipped, needs at least {KS_MIN_SAMPLES} samples"));
        }
    }
    let r = &mut record.results;
    r.set("log_truncation", window.log_truncation())?;
    r.set("term_count", window.term_count() as f64)?;
    r.set("variance_exact", exact)?;
    r.set("variance_asymptotic", variance_asymptotic(&window))?;
    r.set("variance_ratio", exact / variance_asymptotic(&window))?;
    r.set("lyapunov_ratio", lyapunov_ratio(&window))?;
    r.set("third_moment_sum", third_moment_sum(&window))?;
    r.set("third_moment_bound", third_moment_bound(&window))?;
    if config.phi2 {
        let options = arc_options(config);
        let phi2 = record.timed("phi2", || phi2_mc_with(&window, &mc, &options))?;
        let model = window.length() * e_inf_point_with(&window, &bessel_options(config))?;
        let r = &mut record.results;
        r.set("phi2.mean", phi2.estimate.mean)?;
        r.set("phi2.std_error", phi2.estimate.std_error)?;
        r.set("phi2.min", phi2.min_value)?;
        r.set("phi2.failures", phi2.failures as f64)?;
        r.set("e_inf_phi2", model)?;
        r.set("phi2.z", (phi2.estimate.mean - model) / phi2.estimate.std_error)?;
        record.diagnostics.quadrature.insert("phi2_evaluations".into(), phi2.total_evaluations as f64);
    }
    Ok(record.finish())
}

/// The closed-form expectation chain for the window.
pub fn cmd_predict(config: &RunConfig) -> Result<ResultRecord> {
    let window = config.window()?;
    let mut record = RecordBuilder::new(config);
    let report = predict_with(&window, &bessel_options(config))?;
    let gap = (report.f_closed - report.f_quad).abs() / report.f_quad;
    let r = &mut record.results;
    r.set("log_truncation", window.log_truncation())?;
    r.set("beta", report.beta)?;
    r.set("f_closed", report.f_closed)?;
    r.set("f_quad", report.f_quad)?;
    r.set("f_relative_gap", gap)?;
    r.set("e_inf_point", report.e_inf_point)?;
    r.set("e_inf_arc", report.e_inf_arc)?;
    r.set("theorem_asymptotic", report.theorem_asymptotic)?;
    r.set("theorem_ratio", report.theorem_ratio())?;
    r.set("constant_ratio", report.e_inf_point * (6.0 * PI).sqrt() / window.start().ln().powf(1.5))?;
    if gap > 1e-8 {
        record.warn(format!("closed form and quadrature of F differ by {gap:e} (relative)"));
    }
    Ok(record.finish())
}

/// `2 sqrt(β/π) F(β)` with `β = 1/(2σ²)`: the Gaussian expectation of
/// `sqrt(1 + X²)` for `X ~ N(0, σ²)`.
fn gaussian_point_expectation(variance: f64, options: &BesselOptions) -> Result<f64> {
    let beta = 0.5 / variance;
    Ok(2.0 * (beta / PI).sqrt() * f_of_beta_closed_with(beta, options)?)
}

/// Deterministic arc length, Monte Carlo `E Φ₂`, the model expectation and
/// the asymptotic side by side.
pub fn cmd_compare(config: &RunConfig) -> Result<ResultRecord> {
    let window = config.window()?;
    let mut record = RecordBuilder::new(config);
    let report = arc_length(config, &window, &mut record)?;
    record_arc_length(&report, &mut record)?;
    let mc = McConfig::new(config.samples, config.seed)?;
    let phi2 = record.timed("phi2", || phi2_mc_with(&window, &mc, &arc_options(config)))?;
    let bessel = bessel_options(config);
    let model = window.length() * e_inf_point_with(&window, &bessel)?;
    let asymptotic = theorem_asymptotic(window.start(), window.length())?;
    let exact_model = window.length() * gaussian_point_expectation(variance_exact(&window), &bessel)?;
    let z = (phi2.estimate.mean - model) / phi2.estimate.std_error;
    let r = &mut record.results;
    r.set("phi2.mean", phi2.estimate.mean)?;
    r.set("phi2.std_error", phi2.estimate.std_error)?;
    r.set("phi2.min", phi2.min_value)?;
    r.set("phi2.failures", phi2.failures as f64)?;
    r.set("e_inf_phi2", model)?;
    r.set("theorem_asymptotic", asymptotic)?;
    r.set("phi2.z", z)?;
    r.flag("phi2_within_3_sigma", z.abs() <= 3.0);
    r.set("ratio.l_numeric_to_theorem", report.l_numeric / asymptotic)?;
    r.set("ratio.phi2_to_theorem", phi2.estimate.mean / asymptotic)?;
    r.set("ratio.e_inf_phi2_to_theorem", model / asymptotic)?;
    // The model uses the asymptotic variance; the same Gaussian expectation
    // with the exact finite-P variance shows how much of any gap that explains.
    r.set("e_inf_phi2_exact_variance", exact_model)?;
    r.set("phi2.z_exact_variance", (phi2.estimate.mean - exact_model) / phi2.estimate.std_error)?;
    record.diagnostics.quadrature.insert("phi2_evaluations".into(), phi2.total_evaluations as f64);
    if z.abs() > 3.0 {
        record.warn(format!("Monte Carlo E(Phi2) is {z:.2} standard errors from e_inf_phi2"));
    }
    Ok(record.finish())
}
