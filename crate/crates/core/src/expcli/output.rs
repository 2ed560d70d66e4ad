use std::io::Write;

use serde::Serialize;

use super::experiments::{
    MixedExperiment, NoiseRow, NoiseSweep, PureExperiment, ScatterExperiment, SingleOutcome, StateParams, StateRecord,
};
use super::{ExperimentConfig, OutputFormat};
use crate::error::Result;

pub const PURE_HEADER: &str =
    "index,theta1,theta2,theta3,gamma1,gamma2,gamma3,i4,chsh,ent_measure,alpha1,alpha2,beta1,beta2,converged";
pub const MIXED_HEADER: &str = "index,p1,p2,p3,p4,i4,chsh,alpha1,alpha2,beta1,beta2,converged";
pub const NOISE_HEADER: &str = "p,i4,chsh";
pub const SCATTER_HEADER: &str = "index,ent_measure,i4";

#[derive(Serialize)]
struct Envelope<'a, S: Serialize, R: Serialize> {
    config: &'a ExperimentConfig,
    seed: u64,
    version: &'static str,
    summary: S,
    records: R,
}

fn write_json<W: Write>(
    out: W,
    cfg: &ExperimentConfig,
    summary: impl Serialize,
    records: impl Serialize,
) -> Result<()> {
    let envelope = Envelope {
        config: cfg,
        seed: cfg.seed,
        version: env!("CARGO_PKG_VERSION"),
        summary,
        records,
    };
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, &envelope)?;
    writeln!(out)?;
    Ok(())
}

/// Floats use Rust's shortest round-trip form so files reparse to the same bits.
fn write_csv<W: Write>(out: W, header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header.split(','))?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn phase_fields(r: &StateRecord) -> [String; 4] {
    r.phases_at_max.to_array().map(|v| v.to_string())
}

fn pure_row(r: &StateRecord) -> Vec<String> {
    let StateParams::Pure(p) = r.params else {
        unreachable!("pure rows come from pure records");
    };
    let mut row = vec![r.index.to_string()];
    row.extend([p.theta1, p.theta2, p.theta3, p.gamma1, p.gamma2, p.gamma3, r.i4, r.chsh].map(|v| v.to_string()));
    row.push(r.entanglement_measure.map(|v| v.to_string()).unwrap_or_default());
    row.extend(phase_fields(r));
    row.push(r.converged.to_string());
    row
}

fn mixed_row(r: &StateRecord) -> Vec<String> {
    let StateParams::Mixed(m) = r.params else {
        unreachable!("mixed rows come from mixed records");
    };
    let mut row = vec![r.index.to_string()];
    row.extend(m.p.map(|v| v.to_string()));
    row.extend([r.i4, r.chsh].map(|v| v.to_string()));
    row.extend(phase_fields(r));
    row.push(r.converged.to_string());
    row
}

fn noise_row(r: &NoiseRow) -> Vec<String> {
    vec![r.p.to_string(), r.i4.to_string(), r.chsh.to_string()]
}

pub fn write_pure<W: Write>(out: W, exp: &PureExperiment, cfg: &ExperimentConfig) -> Result<()> {
    match cfg.format {
        OutputFormat::Csv => write_csv(out, PURE_HEADER, exp.records.iter().map(pure_row)),
        OutputFormat::Json => write_json(out, cfg, &exp.summary, &exp.records),
    }
}

pub fn write_mixed<W: Write>(out: W, exp: &MixedExperiment, cfg: &ExperimentConfig) -> Result<()> {
    match cfg.format {
        OutputFormat::Csv => write_csv(out, MIXED_HEADER, exp.records.iter().map(mixed_row)),
        OutputFormat::Json => write_json(out, cfg, &exp.summary, &exp.records),
    }
}

#[derive(Serialize)]
struct ScatterSummary {
    samples: usize,
    pearson: Option<f64>,
}

pub fn write_scatter<W: Write>(out: W, exp: &ScatterExperiment, cfg: &ExperimentConfig) -> Result<()> {
    match cfg.format {
        OutputFormat::Csv => write_csv(
            out,
            SCATTER_HEADER,
            exp.records
                .iter()
                .map(|r| vec![r.index.to_string(), r.ent_measure.to_string(), r.i4.to_string()]),
        ),
        OutputFormat::Json => {
            let summary = ScatterSummary {
                samples: exp.records.len(),
                pearson: exp.pearson,
            };
            write_json(out, cfg, summary, &exp.records)
        }
    }
}

#[derive(Serialize)]
struct NoiseSummary {
    steps: usize,
    grid_step: f64,
    i4_threshold: Option<f64>,
    chsh_threshold: Option<f64>,
}

pub fn write_noise<W: Write>(out: W, sweep: &NoiseSweep, cfg: &ExperimentConfig) -> Result<()> {
    match cfg.format {
        OutputFormat::Csv => write_csv(out, NOISE_HEADER, sweep.rows.iter().map(noise_row)),
        OutputFormat::Json => {
            let summary = NoiseSummary {
                steps: sweep.rows.len(),
                grid_step: sweep.grid_step,
                i4_threshold: sweep.i4_threshold,
                chsh_threshold: sweep.chsh_threshold,
            };
            write_json(out, cfg, summary, &sweep.rows)
        }
    }
}

/// Single results use the header of the matching ensemble experiment.
pub fn write_single<W: Write>(out: W, outcome: &SingleOutcome, cfg: &ExperimentConfig) -> Result<()> {
    match (outcome, cfg.format) {
        (SingleOutcome::Noise(row), OutputFormat::Csv) => write_csv(out, NOISE_HEADER, [noise_row(row)]),
        (SingleOutcome::State(r), OutputFormat::Csv) => match r.params {
            StateParams::Pure(_) => write_csv(out, PURE_HEADER, [pure_row(r)]),
            StateParams::Mixed(_) => write_csv(out, MIXED_HEADER, [mixed_row(r)]),
        },
        (SingleOutcome::Noise(row), OutputFormat::Json) => write_json(out, cfg, row, [row]),
        (SingleOutcome::State(r), OutputFormat::Json) => write_json(out, cfg, r, [r]),
    }
}
