use std::f64::consts::PI;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::riemann::EvalWindow;

pub const DEFAULT_BATCH_SIZE: usize = 1024;

/// Monte Carlo run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub sample_count: usize,
    pub master_seed: u64,
    /// Samples per reduction batch; batches are merged in index order.
    pub batch_size: usize,
}

impl McConfig {
    pub fn new(sample_count: usize, master_seed: u64) -> Result<Self> {
        let config = Self { sample_count, master_seed, batch_size: DEFAULT_BATCH_SIZE };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_count < 2 {
            return Err(Error::InvalidConfig(format!(
                "sample_count must be at least 2, got {}",
                self.sample_count
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be positive".into()));
        }
        Ok(())
    }
}

/// Reproducibility token of one phase vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedPath {
    pub master_seed: u64,
    pub index: u64,
}

/// One realization `(φ_1, …, φ_{n<P})` of the independent uniform phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSample {
    pub phases: Vec<f64>,
    pub seed_path: SeedPath,
}

impl PhaseSample {
    /// All phases zero: the process reduces to the deterministic series.
    pub fn zero(window: &EvalWindow) -> Self {
        Self { phases: vec![0.0; window.term_count()], seed_path: SeedPath { master_seed: 0, index: u64::MAX } }
    }
}

/// Phases for sample `index`, uniform on `[-π, π]`.
///
/// Each sample reads its own ChaCha8 stream (key = master seed, stream id =
/// sample index) from word 0, so phase `φ_n` is a fixed function of
/// `(seed, index, n)` regardless of which samples are drawn or in what order.
pub fn sample_phases(window: &EvalWindow, config: &McConfig, index: usize) -> PhaseSample {
    debug_assert!(index < config.sample_count);
    let mut phases = Vec::with_capacity(window.term_count());
    fill_phases(window.term_count(), config.master_seed, index as u64, &mut phases);
    PhaseSample { phases, seed_path: SeedPath { master_seed: config.master_seed, index: index as u64 } }
}

pub(crate) fn fill_phases(count: usize, master_seed: u64, index: u64, out: &mut Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    let uniform = Uniform::new_inclusive(-PI, PI);
    out.clear();
    out.extend((0..count).map(|_| uniform.sample(&mut rng)));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> EvalWindow {
        EvalWindow::for_truncation(100.0).unwrap()
    }

    #[test]
    fn deterministic_and_in_range() {
        let w = window();
        let c = McConfig::new(10, 7).unwrap();
        let a = sample_phases(&w, &c, 3);
        let b = sample_phases(&w, &c, 3);
        assert_eq!(a, b);
        assert_eq!(a.phases.len(), 99);
        assert!(a.phases.iter().all(|p| (-PI..=PI).contains(p)));
        assert_ne!(a.phases, sample_phases(&w, &c, 4).phases);
    }

    #[test]
    fn prefix_stable_across_truncation() {
        let c = McConfig::new(10, 11).unwrap();
        let short = sample_phases(&EvalWindow::for_truncation(20.0).unwrap(), &c, 2);
        let long = sample_phases(&window(), &c, 2);
        assert_eq!(short.phases[..], long.phases[..short.phases.len()]);
    }

    #[test]
    fn config_validation() {
        assert!(McConfig::new(1, 0).is_err());
        let bad = McConfig { sample_count: 10, master_seed: 0, batch_size: 0 };
        assert!(bad.validate().is_err());
    }
}
