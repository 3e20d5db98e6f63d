//! The acceptance suite. Each criterion runs at its stated tolerance with a
//! fixed seed and reports its measured values; `cmd_verify` and the
//! `acceptance` test target both run these functions.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::time::Instant;

use serde::Serialize;
use zeta_arclen::riemann::{arc_length_numeric, EvalWindow};
use zeta_arclen::special::{
    beta_from_log, e_inf_point_with, f_of_beta_closed_with, f_of_beta_quad, theorem_asymptotic, BesselOptions,
};
use zeta_arclen::stochastic::{
    distribution_check, lyapunov_ratio, mc_moments, phi1_samples, phi2_mc, variance_asymptotic, variance_exact,
    variance_std_error, McConfig, KS_THRESHOLD,
};

use crate::commands::{bessel_options, RecordBuilder};
use crate::config::RunConfig;
use crate::error::{HarnessError, Result};
use crate::record::{ResultRecord, Table};

pub const CRITERIA: [(u8, &str, f64); 9] = [
    (1, "Bessel closed form of F matches quadrature", 1.0),
    (2, "F asymptotics in ln P and small beta", 1.0),
    (3, "point expectation constant at ln T = 100", 1.0),
    (4, "variance of Phi1: Monte Carlo and exact/asymptotic", 30.0),
    (5, "Lyapunov ratio decreasing and bounded", 5.0),
    (6, "KS distance to the Gaussian at P = 200", 10.0),
    (7, "arc-length identity on [1e6, 1e6 + 50]", 60.0),
    (8, "Monte Carlo E(Phi2) against the model expectation", 300.0),
    (9, "determinism across runs and thread counts", f64::INFINITY),
];

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    pub bessel: BesselOptions,
}

impl VerifyOptions {
    pub fn new(seed: u64) -> Self {
        Self { seed, bessel: BesselOptions::default() }
    }

    pub fn from_config(config: &RunConfig) -> Self {
        Self { seed: config.seed, bessel: bessel_options(config) }
    }
}

/// What one criterion measured. `metrics`, `numeric_pass` and `detail` are
/// reproducible; `elapsed` is not and stays out of the payload.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub numeric_pass: bool,
    pub metrics: Vec<(String, f64)>,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: f64,
    #[serde(skip)]
    pub budget: f64,
}

impl CriterionOutcome {
    pub fn within_budget(&self) -> bool {
        self.elapsed < self.budget
    }

    pub fn passed(&self) -> bool {
        self.numeric_pass && self.within_budget()
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} criterion {}: {} ({:.2} s", self.id, self.name, self.elapsed)?;
        if !self.within_budget() {
            write!(f, ", over the {} s budget", self.budget)?;
        }
        write!(f, ") — {}", self.detail)
    }
}

struct Check {
    pass: bool,
    metrics: Vec<(String, f64)>,
    detail: String,
}

impl Check {
    fn new() -> Self {
        Self { pass: true, metrics: Vec::new(), detail: String::new() }
    }

    fn metric(&mut self, name: impl Into<String>, value: f64) -> f64 {
        self.metrics.push((name.into(), value));
        value
    }

    fn require(&mut self, ok: bool, what: impl fmt::Display) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(if ok { "ok: " } else { "violated: " });
        self.detail.push_str(&what.to_string());
        self.pass &= ok;
    }
}

/// Runs one of criteria 1–8.
pub fn criterion(id: u8, options: &VerifyOptions) -> CriterionOutcome {
    let (_, name, budget) = CRITERIA[usize::from(id) - 1];
    let clock = Instant::now();
    let mut check = Check::new();
    let result = match id {
        1 => bessel_identity(options, &mut check),
        2 => f_asymptotics(options, &mut check),
        3 => log_t_constant(options, &mut check),
        4 => variance(options, &mut check),
        5 => lyapunov(&mut check),
        6 => clt_quality(options, &mut check),
        7 => arc_length_identity(&mut check),
        8 => model_closure(options, &mut check),
        _ => panic!("criterion {id} is not a single computation"),
    };
    if let Err(e) = result {
        check.pass = false;
        check.require(false, format!("error: {e}"));
    }
    CriterionOutcome {
        id,
        name,
        numeric_pass: check.pass,
        metrics: check.metrics,
        detail: check.detail,
        elapsed: clock.elapsed().as_secs_f64(),
        budget,
    }
}

fn bessel_identity(options: &VerifyOptions, check: &mut Check) -> Result<()> {
    let mut worst: f64 = 0.0;
    for beta in [1.0, 0.1, 0.01, 0.001] {
        let quad = f_of_beta_quad(beta)?;
        let closed = f_of_beta_closed_with(beta, &options.bessel)?;
        worst = worst.max(check.metric(format!("relative_gap.beta={beta}"), (closed - quad).abs() / quad));
    }
    check.require(worst <= 1e-8, format!("max relative gap {worst:.3e} <= 1e-8"));
    Ok(())
}

fn f_asymptotics(options: &VerifyOptions, check: &mut Check) -> Result<()> {
    let mut c: f64 = 0.0;
    for log_p in [10.0, 20.0, 50.0] {
        let f = f_of_beta_closed_with(beta_from_log(log_p), &options.bessel)?;
        let gap = (f - 2.0 / 3.0 * log_p.powi(3)).abs();
        c = c.max(check.metric(format!("gap_over_lnlnP.lnP={log_p}"), gap / log_p.ln()));
    }
    check.metric("fitted_c", c);
    check.require(c <= 10.0, format!("fitted C = {c:.4} <= 10"));
    let beta = 1e-4;
    let scaled = check.metric("f_times_2beta", f_of_beta_closed_with(beta, &options.bessel)? * 2.0 * beta);
    check.require((scaled - 1.0).abs() <= 1e-3, format!("F(1e-4)·2β = {scaled:.6} within 1e-3 of 1"));
    Ok(())
}

fn log_t_constant(options: &VerifyOptions, check: &mut Check) -> Result<()> {
    let mut ratios = Vec::new();
    for log_t in [20.0, 50.0, 100.0, 200.0] {
        let w = EvalWindow::new(f64::exp(log_t), 1.0)?;
        let ratio = e_inf_point_with(&w, &options.bessel)? * (6.0 * PI).sqrt() / f64::powf(log_t, 1.5);
        ratios.push(check.metric(format!("ratio.lnT={log_t}"), ratio));
    }
    let at_100 = ratios[2];
    check.require((0.98..=1.02).contains(&at_100), format!("ratio {at_100:.6} at ln T = 100 in [0.98, 1.02]"));
    let monotone = ratios.windows(2).all(|r| (1.0 - r[1]).abs() < (1.0 - r[0]).abs());
    check.require(monotone, "distance to 1 shrinks over ln T = 20, 50, 100, 200");
    Ok(())
}

fn variance(options: &VerifyOptions, check: &mut Check) -> Result<()> {
    let w = EvalWindow::for_truncation(100.0)?;
    let config = McConfig::new(200_000, options.seed)?;
    let values = phi1_samples(w.start(), &w, &config)?;
    let est = mc_moments(w.start(), &w, &config)?;
    let sigma = variance_std_error(&values);
    let exact = variance_exact(&w);
    check.metric("mc_variance", est.variance);
    check.metric("variance_std_error", sigma);
    check.metric("variance_exact", exact);
    let z = check.metric("variance_z", (est.variance - exact) / sigma);
    check.require(z.abs() <= 3.0, format!("Monte Carlo variance {z:+.3} sigma from exact"));
    let ratio = |p: f64| -> Result<f64> {
        let w = EvalWindow::for_truncation(p)?;
        Ok(variance_exact(&w) / variance_asymptotic(&w))
    };
    let (r2, r4) = (check.metric("ratio.P=1e2", ratio(1e2)?), check.metric("ratio.P=1e4", ratio(1e4)?));
    check.require((0.8..=1.2).contains(&r4), format!("exact/asymptotic {r4:.4} at P = 1e4 in [0.8, 1.2]"));
    check.require((r4 - 1.0).abs() < (r2 - 1.0).abs(), format!("closer to 1 than {r2:.4} at P = 1e2"));
    Ok(())
}

fn lyapunov(check: &mut Check) -> Result<()> {
    let mut ratios = Vec::new();
    let mut bound: f64 = 0.0;
    for p in [1e2, 1e3, 1e4, 1e5, 1e6] {
        let r = check.metric(format!("ratio.P={p:e}"), lyapunov_ratio(&EvalWindow::for_truncation(p)?));
        bound = bound.max(r * f64::ln(p).powf(1.5));
        ratios.push(r);
    }
    check.metric("max_scaled", bound);
    check.require(ratios.windows(2).all(|r| r[1] < r[0]), "strictly decreasing over P = 1e2..1e6");
    check.require(bound <= 20.0, format!("max ratio·ln^1.5 P = {bound:.4} <= 20"));
    Ok(())
}

fn clt_quality(options: &VerifyOptions, check: &mut Check) -> Result<()> {
    let w = EvalWindow::with_truncation(1.0e6, 1.0, 200.0)?;
    let ks = check.metric("ks", distribution_check(w.start(), &w, &McConfig::new(10_000, options.seed)?)?);
    check.require(ks <= KS_THRESHOLD, format!("KS {ks:.5} <= {KS_THRESHOLD}"));
    Ok(())
}

fn arc_length_identity(check: &mut Check) -> Result<()> {
    let w = EvalWindow::new(1.0e6, 50.0)?;
    let report = arc_length_numeric(&w)?;
    check.metric("l_numeric", report.l_numeric);
    check.metric("extrema_sum", report.extrema_sum);
    let residual = check.metric("residual", report.residual);
    let zeros = check.metric("zero_count", report.zero_count() as f64);
    let expected = check.metric("expected_zero_count", 50.0 / TAU * (1.0e6 / TAU).ln());
    check.require(residual > 0.0 && residual < 52.0, format!("residual {residual:.6} in (0, 52)"));
    check.require((zeros - expected).abs() <= 5.0, format!("{zeros} zeros vs {expected:.3} expected (±5)"));
    Ok(())
}

fn model_closure(options: &VerifyOptions, check: &mut Check) -> Result<()> {
    let w = EvalWindow::new(1.0e6, 1.0)?;
    let phi2 = phi2_mc(&w, &McConfig::new(200, options.seed)?)?;
    let model = w.length() * e_inf_point_with(&w, &options.bessel)?;
    let asymptotic = theorem_asymptotic(1.0e6, 1.0)?;
    let mean = check.metric("phi2_mean", phi2.estimate.mean);
    let se = check.metric("phi2_std_error", phi2.estimate.std_error);
    check.metric("e_inf_phi2", model);
    check.metric("theorem_asymptotic", asymptotic);
    check.metric("ratio.phi2_to_theorem", mean / asymptotic);
    check.metric("ratio.e_inf_phi2_to_theorem", model / asymptotic);
    let z = check.metric("z", (mean - model) / se);
    check.require(z.abs() <= 3.0, format!("E(Phi2) {mean:.4} vs e_inf_phi2 {model:.4}: {z:+.2} standard errors"));
    Ok(())
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
}

/// Worker count for the multi-threaded determinism run.
pub fn many_threads() -> usize {
    std::thread::available_parallelism().map_or(2, |n| n.get()).max(2)
}

pub fn payload(outcomes: &[CriterionOutcome]) -> String {
    serde_json::to_string(outcomes).expect("outcomes serialize")
}

/// Runs the selected criteria (all when empty). Criterion 9 runs the others
/// on one worker thread and again on several and compares the payloads.
pub fn run_suite(selected: &[u8], options: &VerifyOptions) -> Vec<CriterionOutcome> {
    let wanted = |id: u8| selected.is_empty() || selected.contains(&id);
    let ids: Vec<u8> = (1..=8).filter(|&id| wanted(id)).collect();
    let run = |threads: usize| pool(threads).install(|| ids.iter().map(|&id| criterion(id, options)).collect());
    let mut outcomes: Vec<CriterionOutcome> = run(1);
    if wanted(9) {
        let clock = Instant::now();
        let again: Vec<CriterionOutcome> = run(many_threads());
        outcomes.push(determinism_outcome(&outcomes, &again, clock.elapsed().as_secs_f64()));
    }
    outcomes
}

/// Criterion 9 over criteria `ids`: one run on a single thread, one on many.
pub fn determinism(ids: &[u8], options: &VerifyOptions) -> CriterionOutcome {
    let clock = Instant::now();
    let run = |threads: usize| -> Vec<CriterionOutcome> {
        pool(threads).install(|| ids.iter().map(|&id| criterion(id, options)).collect())
    };
    let one = run(1);
    let many = run(many_threads());
    determinism_outcome(&one, &many, clock.elapsed().as_secs_f64())
}

fn determinism_outcome(first: &[CriterionOutcome], second: &[CriterionOutcome], elapsed: f64) -> CriterionOutcome {
    let (a, b) = (payload(first), payload(second));
    let identical = a == b;
    let mut check = Check::new();
    check.metric("payload_bytes", a.len() as f64);
    check.metric("worker_threads", many_threads() as f64);
    let ids: Vec<String> = first.iter().map(|o| o.id.to_string()).collect();
    check.require(
        identical,
        format!("payload of criteria [{}] identical on 1 and {} threads", ids.join(", "), many_threads()),
    );
    CriterionOutcome {
        id: 9,
        name: CRITERIA[8].1,
        numeric_pass: check.pass,
        metrics: check.metrics,
        detail: check.detail,
        elapsed,
        budget: CRITERIA[8].2,
    }
}

/// Runs the suite, prints the pass/fail table, and returns the record with
/// the ids of failed criteria.
pub fn cmd_verify(config: &RunConfig) -> Result<(ResultRecord, Vec<u8>)> {
    let mut record = RecordBuilder::new(config);
    let options = VerifyOptions::from_config(config);
    let outcomes = run_suite(&config.criteria, &options);
    let mut table = Table::new(&["criterion", "passed"]);
    for o in &outcomes {
        println!("{o}");
        table.push(vec![f64::from(o.id), if o.numeric_pass { 1.0 } else { 0.0 }]);
        record.results.flag(&format!("c{}.passed", o.id), o.numeric_pass);
        for (name, value) in &o.metrics {
            record.results.set(&format!("c{}.{name}", o.id), *value)?;
        }
        if !o.numeric_pass {
            record.warn(format!("criterion {} failed: {}", o.id, o.detail));
        }
    }
    record.tables.insert("criteria".into(), table);
    let mut record = record.finish();
    // Timings vary run to run, so they live with the provenance.
    for o in &outcomes {
        record.provenance.timings.insert(format!("c{}", o.id), o.elapsed);
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    Ok((record, failed))
}

/// Error for a verify run with failures.
pub fn failure(failed: &[u8]) -> HarnessError {
    let ids: Vec<String> = failed.iter().map(u8::to_string).collect();
    HarnessError::Consistency(format!("acceptance criteria failed: {}", ids.join(", ")))
}
