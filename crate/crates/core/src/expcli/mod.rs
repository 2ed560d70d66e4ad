//! Experiment harness behind the `nonlocal` binary.
//!
//! Every experiment is a pure function of its [`ExperimentConfig`]: states are
//! drawn sequentially from the master seed, each state's optimisation runs on
//! a seed derived from its index, and records are kept in index order, so
//! output files are identical across runs and thread counts.

mod experiments;
mod histogram;
mod output;

use std::path::PathBuf;

use serde::Serialize;

pub use experiments::{
    run_entanglement_scatter, run_mixed_experiment, run_noise_sweep, run_pure_experiment, run_single, MixedExperiment,
    MixedSummary, NoiseRow, NoiseSweep, PureExperiment, PureSummary, ScatterExperiment, ScatterRecord, SingleInput,
    SingleOutcome, StateParams, StateRecord,
};
pub use histogram::{fit_log_log, fit_power_law, pearson, Histogram, PowerLawFit};
pub use output::{
    write_mixed, write_noise, write_pure, write_scatter, write_single, MIXED_HEADER, NOISE_HEADER, PURE_HEADER,
    SCATTER_HEADER,
};

use crate::error::{Error, Result};
use crate::optim::NelderMeadConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Pure,
    Mixed,
    Entanglement,
    Noise,
    Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub samples: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Stopping threshold on the simplex standard error.
    pub tolerance: f64,
    pub bin_width: f64,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

pub const DEFAULT_SEED: u64 = 2017;
pub const DEFAULT_RESTARTS: usize = 20;

impl ExperimentConfig {
    /// Defaults per experiment: 1000 pure states binned at 0.1, 100 mixed states
    /// binned at 0.002.
    pub fn defaults(experiment: ExperimentKind) -> Self {
        let (samples, bin_width) = match experiment {
            ExperimentKind::Mixed => (100, 0.002),
            ExperimentKind::Single => (1, 0.1),
            _ => (1000, 0.1),
        };
        Self {
            experiment,
            samples,
            seed: DEFAULT_SEED,
            restarts: DEFAULT_RESTARTS,
            tolerance: NelderMeadConfig::default().error_tolerance,
            bin_width,
            output_path: None,
            format: OutputFormat::Csv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::invalid("samples must be at least 1"));
        }
        if self.restarts == 0 {
            return Err(Error::invalid("restarts must be at least 1"));
        }
        if !(self.bin_width > 0.0 && self.bin_width.is_finite()) {
            return Err(Error::invalid(format!(
                "bin width must be positive, got {}",
                self.bin_width
            )));
        }
        self.nelder_mead().validate()
    }

    pub fn nelder_mead(&self) -> NelderMeadConfig {
        NelderMeadConfig {
            error_tolerance: self.tolerance,
            ..NelderMeadConfig::default()
        }
    }

    fn expect_kind(&self, kind: ExperimentKind) -> Result<()> {
        if self.experiment != kind {
            return Err(Error::invalid(format!(
                "config is for {:?}, expected {:?}",
                self.experiment, kind
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        for kind in [
            ExperimentKind::Pure,
            ExperimentKind::Mixed,
            ExperimentKind::Entanglement,
            ExperimentKind::Noise,
            ExperimentKind::Single,
        ] {
            ExperimentConfig::defaults(kind).validate().unwrap();
        }
        let mixed = ExperimentConfig::defaults(ExperimentKind::Mixed);
        assert_eq!((mixed.samples, mixed.bin_width), (100, 0.002));
    }

    #[test]
    fn invalid_configs() {
        let base = ExperimentConfig::defaults(ExperimentKind::Pure);
        for cfg in [
            ExperimentConfig {
                samples: 0,
                ..base.clone()
            },
            ExperimentConfig {
                restarts: 0,
                ..base.clone()
            },
            ExperimentConfig {
                bin_width: 0.0,
                ..base.clone()
            },
            ExperimentConfig {
                tolerance: -1.0,
                ..base.clone()
            },
        ] {
            assert!(cfg.validate().unwrap_err().is_invalid_input());
        }
    }
}
