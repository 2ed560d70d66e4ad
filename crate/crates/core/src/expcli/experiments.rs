use rayon::prelude::*;
use serde::Serialize;

use super::histogram::{fit_power_law, pearson, Histogram, PowerLawFit};
use super::{ExperimentConfig, ExperimentKind};
use crate::cglmp::{cglmp_value, CglmpEvaluator, PhaseConfiguration};
use crate::error::{Error, Result};
use crate::optim::{maximize_with, OptimizationReport};
use crate::qmath::{DensityMatrix, StateVector};
use crate::rng::{derive_seed, substream};
use crate::scenario::{chsh_expectation, ququart_observables, CIRELSON_BOUND, LHV_BOUND};
use crate::states::{
    entanglement_parameter, mixed_bell_state, noisy_state, pure_bell_state, sample_mixed, sample_pure, MixedBellParams,
    PureBellParams,
};

/// Local dimension of every experiment.
const N: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum StateParams {
    Pure(PureBellParams),
    Mixed(MixedBellParams),
}

impl StateParams {
    pub fn density(&self) -> Result<DensityMatrix> {
        match self {
            StateParams::Pure(p) => Ok(pure_bell_state(p)?.to_density()),
            StateParams::Mixed(p) => mixed_bell_state(p),
        }
    }
}

/// One sampled state with its optimised `I_4`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateRecord {
    pub index: usize,
    pub params: StateParams,
    pub i4: f64,
    pub chsh: f64,
    /// `1 − |P|`; pure states only.
    pub entanglement_measure: Option<f64>,
    pub phases_at_max: PhaseConfiguration,
    pub converged: bool,
}

fn optimise(index: usize, evaluator: &CglmpEvaluator, cfg: &ExperimentConfig) -> Result<OptimizationReport> {
    maximize_with(
        evaluator,
        cfg.restarts,
        derive_seed(cfg.seed, index as u64),
        &cfg.nelder_mead(),
    )
}

fn pure_record(
    index: usize,
    params: PureBellParams,
    state: &StateVector,
    cfg: &ExperimentConfig,
) -> Result<StateRecord> {
    let report = optimise(index, &CglmpEvaluator::from_pure(state, N)?, cfg)?;
    let chsh = chsh_expectation(&state.to_density(), &ququart_observables())?;
    let ent = entanglement_parameter(state)?;
    Ok(StateRecord {
        index,
        params: StateParams::Pure(params),
        i4: report.best_value,
        chsh,
        entanglement_measure: Some(ent.measure),
        phases_at_max: report.best_phases,
        converged: report.best_converged,
    })
}

fn mixed_record(
    index: usize,
    params: MixedBellParams,
    rho: &DensityMatrix,
    cfg: &ExperimentConfig,
) -> Result<StateRecord> {
    let report = optimise(index, &CglmpEvaluator::new(rho, N)?, cfg)?;
    Ok(StateRecord {
        index,
        params: StateParams::Mixed(params),
        i4: report.best_value,
        chsh: chsh_expectation(rho, &ququart_observables())?,
        entanglement_measure: None,
        phases_at_max: report.best_phases,
        converged: report.best_converged,
    })
}

fn pure_ensemble(cfg: &ExperimentConfig) -> Result<Vec<StateRecord>> {
    let mut rng = substream(cfg.seed, 0);
    let states: Vec<_> = (0..cfg.samples).map(|_| sample_pure(&mut rng)).collect();
    states
        .par_iter()
        .enumerate()
        .map(|(i, (params, psi))| pure_record(i, *params, psi, cfg))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PureSummary {
    pub samples: usize,
    /// Fraction with `I_4 > 2`.
    pub violation_fraction: f64,
    /// Fraction with `I_4 > 2√2`.
    pub above_cirelson_fraction: f64,
    pub min_i4: f64,
    pub max_i4: f64,
    pub converged_fraction: f64,
    /// Fitted exponent, absent when fewer than three bins are usable.
    pub fit: Option<PowerLawFit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureExperiment {
    pub records: Vec<StateRecord>,
    pub histogram: Histogram,
    pub summary: PureSummary,
}

fn fraction(records: &[StateRecord], pred: impl Fn(&StateRecord) -> bool) -> f64 {
    records.iter().filter(|r| pred(r)).count() as f64 / records.len() as f64
}

fn extremes(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Samples pure sector states, maximises `I_4` for each and summarises.
pub fn run_pure_experiment(cfg: &ExperimentConfig) -> Result<PureExperiment> {
    cfg.expect_kind(ExperimentKind::Pure)?;
    cfg.validate()?;
    let records = pure_ensemble(cfg)?;
    let values: Vec<f64> = records.iter().map(|r| r.i4).collect();
    let histogram = Histogram::from_values(&values, cfg.bin_width)?;
    let (min_i4, max_i4) = extremes(values.iter().copied());
    let summary = PureSummary {
        samples: records.len(),
        violation_fraction: fraction(&records, |r| r.i4 > LHV_BOUND),
        above_cirelson_fraction: fraction(&records, |r| r.i4 > CIRELSON_BOUND),
        min_i4,
        max_i4,
        converged_fraction: fraction(&records, |r| r.converged),
        fit: fit_power_law(&histogram).ok(),
    };
    Ok(PureExperiment {
        records,
        histogram,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedSummary {
    pub samples: usize,
    pub min_i4: f64,
    pub max_i4: f64,
    pub max_abs_i4: f64,
    pub violation_fraction: f64,
    pub converged_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedExperiment {
    pub records: Vec<StateRecord>,
    pub histogram: Histogram,
    pub summary: MixedSummary,
}

/// Samples mixtures diagonal in the `η` basis and maximises `I_4` for each.
pub fn run_mixed_experiment(cfg: &ExperimentConfig) -> Result<MixedExperiment> {
    cfg.expect_kind(ExperimentKind::Mixed)?;
    cfg.validate()?;
    let mut rng = substream(cfg.seed, 0);
    let states: Vec<_> = (0..cfg.samples).map(|_| sample_mixed(&mut rng)).collect();
    let records: Vec<StateRecord> = states
        .par_iter()
        .enumerate()
        .map(|(i, (params, rho))| mixed_record(i, *params, rho, cfg))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = records.iter().map(|r| r.i4).collect();
    let histogram = Histogram::from_values(&values, cfg.bin_width)?;
    let (min_i4, max_i4) = extremes(values.iter().copied());
    let summary = MixedSummary {
        samples: records.len(),
        min_i4,
        max_i4,
        max_abs_i4: min_i4.abs().max(max_i4.abs()),
        violation_fraction: fraction(&records, |r| r.i4 > LHV_BOUND),
        converged_fraction: fraction(&records, |r| r.converged),
    };
    Ok(MixedExperiment {
        records,
        histogram,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterRecord {
    pub index: usize,
    pub ent_measure: f64,
    pub i4: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterExperiment {
    pub records: Vec<ScatterRecord>,
    /// Correlation between `1 − |P|` and `I_4`; reported, not asserted.
    pub pearson: Option<f64>,
}

/// `(1 − |P|, I_4)` pairs for the same ensemble [`run_pure_experiment`] draws.
pub fn run_entanglement_scatter(cfg: &ExperimentConfig) -> Result<ScatterExperiment> {
    cfg.expect_kind(ExperimentKind::Entanglement)?;
    cfg.validate()?;
    let records: Vec<ScatterRecord> = pure_ensemble(cfg)?
        .into_iter()
        .map(|r| ScatterRecord {
            index: r.index,
            ent_measure: r.entanglement_measure.expect("pure records carry the measure"),
            i4: r.i4,
        })
        .collect();
    let xs: Vec<f64> = records.iter().map(|r| r.ent_measure).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.i4).collect();
    Ok(ScatterExperiment {
        pearson: pearson(&xs, &ys),
        records,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseRow {
    pub p: f64,
    pub i4: f64,
    pub chsh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseSweep {
    pub rows: Vec<NoiseRow>,
    pub grid_step: f64,
    /// Noise level where `I_4` first exceeds 2, interpolated between grid points.
    pub i4_threshold: Option<f64>,
    /// Noise level where `⟨B⟩` first exceeds 2, interpolated between grid points.
    pub chsh_threshold: Option<f64>,
}

impl NoiseSweep {
    /// States between the two thresholds violate CGLMP but satisfy CHSH.
    pub fn window(&self) -> Option<(f64, f64)> {
        match (self.i4_threshold, self.chsh_threshold) {
            (Some(lo), Some(hi)) if lo < hi => Some((lo, hi)),
            _ => None,
        }
    }
}

fn first_crossing(ps: &[f64], values: &[f64], level: f64) -> Option<f64> {
    ps.windows(2).zip(values.windows(2)).find_map(|(p, v)| {
        (v[0] <= level && v[1] > level).then(|| p[0] + (level - v[0]) * (p[1] - p[0]) / (v[1] - v[0]))
    })
}

/// `I_4` at the maximally-entangled optimum and `⟨B⟩` along the white-noise family.
pub fn run_noise_sweep(p_min: f64, p_max: f64, steps: usize, cfg: &ExperimentConfig) -> Result<NoiseSweep> {
    cfg.expect_kind(ExperimentKind::Noise)?;
    if !(0.0 <= p_min && p_min < p_max && p_max <= 1.0) {
        return Err(Error::invalid(format!(
            "noise range must satisfy 0 <= p_min < p_max <= 1, got [{p_min}, {p_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::invalid(format!(
            "noise sweep needs at least 2 steps, got {steps}"
        )));
    }
    let grid_step = (p_max - p_min) / (steps - 1) as f64;
    let scenario = ququart_observables();
    let phases = PhaseConfiguration::MAXIMALLY_ENTANGLED_OPTIMUM;
    let rows: Vec<NoiseRow> = (0..steps)
        .map(|i| {
            let p = if i + 1 == steps {
                p_max
            } else {
                p_min + i as f64 * grid_step
            };
            let rho = noisy_state(p, N)?;
            Ok(NoiseRow {
                p,
                i4: cglmp_value(&rho, &phases, N)?,
                chsh: chsh_expectation(&rho, &scenario)?,
            })
        })
        .collect::<Result<_>>()?;
    let ps: Vec<f64> = rows.iter().map(|r| r.p).collect();
    let i4: Vec<f64> = rows.iter().map(|r| r.i4).collect();
    let chsh: Vec<f64> = rows.iter().map(|r| r.chsh).collect();
    Ok(NoiseSweep {
        i4_threshold: first_crossing(&ps, &i4, LHV_BOUND),
        chsh_threshold: first_crossing(&ps, &chsh, LHV_BOUND),
        rows,
        grid_step,
    })
}

/// State selected for single-state evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingleInput {
    Pure(PureBellParams),
    Mixed(MixedBellParams),
    /// White-noise mixture with the maximally entangled state.
    Noise(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SingleOutcome {
    State(StateRecord),
    Noise(NoiseRow),
}

/// Evaluates one state: at `phases` when given, otherwise by multi-start search.
pub fn run_single(
    input: &SingleInput,
    phases: Option<PhaseConfiguration>,
    cfg: &ExperimentConfig,
) -> Result<SingleOutcome> {
    cfg.validate()?;
    let scenario = ququart_observables();
    let (rho, params, ent) = match input {
        SingleInput::Pure(p) => {
            let psi = pure_bell_state(p)?;
            let ent = entanglement_parameter(&psi)?.measure;
            (psi.to_density(), Some(StateParams::Pure(*p)), Some(ent))
        }
        SingleInput::Mixed(p) => (mixed_bell_state(p)?, Some(StateParams::Mixed(*p)), None),
        SingleInput::Noise(p) => (noisy_state(*p, N)?, None, None),
    };
    let chsh = chsh_expectation(&rho, &scenario)?;
    let (i4, phases_at_max, converged) = match phases {
        Some(ph) => (cglmp_value(&rho, &ph, N)?, ph, true),
        None => {
            let report = optimise(0, &CglmpEvaluator::new(&rho, N)?, cfg)?;
            (report.best_value, report.best_phases, report.best_converged)
        }
    };
    Ok(match (input, params) {
        (SingleInput::Noise(p), _) => SingleOutcome::Noise(NoiseRow { p: *p, i4, chsh }),
        (_, Some(params)) => SingleOutcome::State(StateRecord {
            index: 0,
            params,
            i4,
            chsh,
            entanglement_measure: ent,
            phases_at_max,
            converged,
        }),
        _ => unreachable!("pure and mixed inputs carry parameters"),
    })
}
