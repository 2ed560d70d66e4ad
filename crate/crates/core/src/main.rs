use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nonlocal_core::cglmp::PhaseConfiguration;
use nonlocal_core::expcli::{self, ExperimentConfig, ExperimentKind, OutputFormat, SingleInput, SingleOutcome};
use nonlocal_core::states::{MixedBellParams, PureBellParams};
use nonlocal_core::Error;

const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;

/// CGLMP and CHSH experiments on two ququarts.
#[derive(Parser)]
#[command(name = "nonlocal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximise I_4 over random pure states of the H+ sector.
    Pure(Common),
    /// Maximise I_4 over random mixtures of the H+ basis.
    Mixed(Common),
    /// Entanglement measure against optimised I_4 for random pure states.
    Entanglement(Common),
    /// I_4 and CHSH along the white-noise family.
    Noise(NoiseArgs),
    /// Evaluate one state.
    Single(Box<SingleArgs>),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Nelder-Mead stopping threshold.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    bin_width: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct NoiseArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0.0)]
    p_min: f64,
    #[arg(long, default_value_t = 1.0)]
    p_max: f64,
    #[arg(long, default_value_t = 1001)]
    steps: usize,
}

#[derive(Args)]
struct SingleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    theta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta3: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma3: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p3: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p4: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    noise_p: Option<f64>,
    /// Fixed measurement phases; all four skip the search.
    #[arg(long, allow_hyphen_values = true)]
    alpha1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta2: Option<f64>,
}

impl Common {
    fn config(&self, kind: ExperimentKind) -> ExperimentConfig {
        let d = ExperimentConfig::defaults(kind);
        ExperimentConfig {
            experiment: kind,
            samples: self.samples.unwrap_or(d.samples),
            seed: self.seed.unwrap_or(d.seed),
            restarts: self.restarts.unwrap_or(d.restarts),
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            bin_width: self.bin_width.unwrap_or(d.bin_width),
            output_path: self.out.clone(),
            format: match self.format {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            },
        }
    }
}

fn all_or_none<const K: usize>(what: &str, values: [Option<f64>; K]) -> Result<Option<[f64; K]>, Error> {
    let given = values.iter().filter(|v| v.is_some()).count();
    match given {
        0 => Ok(None),
        _ if given == K => Ok(Some(values.map(|v| v.unwrap_or_default()))),
        _ => Err(Error::InvalidInput(format!("{what} needs all {K} values, got {given}"))),
    }
}

impl SingleArgs {
    fn input(&self) -> Result<SingleInput, Error> {
        let pure = all_or_none(
            "pure state",
            [
                self.theta1,
                self.theta2,
                self.theta3,
                self.gamma1,
                self.gamma2,
                self.gamma3,
            ],
        )?;
        let mixed = all_or_none("mixed state", [self.p1, self.p2, self.p3, self.p4])?;
        match (pure, mixed, self.noise_p) {
            (Some(v), None, None) => Ok(SingleInput::Pure(PureBellParams::new(
                [v[0], v[1], v[2]],
                [v[3], v[4], v[5]],
            )?)),
            (None, Some(p), None) => Ok(SingleInput::Mixed(MixedBellParams::new(p)?)),
            (None, None, Some(p)) => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidInput(format!("noise-p must lie in [0, 1], got {p}")));
                }
                Ok(SingleInput::Noise(p))
            }
            _ => Err(Error::InvalidInput(
                "give exactly one of --theta/--gamma, --p1..4 or --noise-p".into(),
            )),
        }
    }

    fn phases(&self) -> Result<Option<PhaseConfiguration>, Error> {
        all_or_none(
            "phase configuration",
            [self.alpha1, self.alpha2, self.beta1, self.beta2],
        )?
        .map(PhaseConfiguration::from_array)
        .transpose()
    }
}

fn open(cfg: &ExperimentConfig) -> Result<Box<dyn Write>, Error> {
    Ok(match &cfg.output_path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn finish(mut out: Box<dyn Write>) -> Result<(), Error> {
    out.flush()?;
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:.4}"))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Pure(c) => {
            let cfg = c.config(ExperimentKind::Pure);
            let exp = expcli::run_pure_experiment(&cfg)?;
            let s = &exp.summary;
            eprintln!(
                "pure: {} states, I4 in [{:.4}, {:.4}], I4 > 2: {:.4}, I4 > 2sqrt2: {:.4}, exponent {}",
                s.samples,
                s.min_i4,
                s.max_i4,
                s.violation_fraction,
                s.above_cirelson_fraction,
                fmt_opt(s.fit.as_ref().map(|f| f.exponent))
            );
            let mut out = open(&cfg)?;
            expcli::write_pure(&mut out, &exp, &cfg)?;
            finish(out)
        }
        Command::Mixed(c) => {
            let cfg = c.config(ExperimentKind::Mixed);
            let exp = expcli::run_mixed_experiment(&cfg)?;
            let s = &exp.summary;
            eprintln!(
                "mixed: {} states, I4 in [{:.6}, {:.6}], max |I4| {:.6}",
                s.samples, s.min_i4, s.max_i4, s.max_abs_i4
            );
            let mut out = open(&cfg)?;
            expcli::write_mixed(&mut out, &exp, &cfg)?;
            finish(out)
        }
        Command::Entanglement(c) => {
            let cfg = c.config(ExperimentKind::Entanglement);
            let exp = expcli::run_entanglement_scatter(&cfg)?;
            eprintln!(
                "entanglement: {} states, pearson {}",
                exp.records.len(),
                fmt_opt(exp.pearson)
            );
            let mut out = open(&cfg)?;
            expcli::write_scatter(&mut out, &exp, &cfg)?;
            finish(out)
        }
        Command::Noise(a) => {
            let cfg = a.common.config(ExperimentKind::Noise);
            let sweep = expcli::run_noise_sweep(a.p_min, a.p_max, a.steps, &cfg)?;
            eprintln!(
                "noise: I4 > 2 from p = {}, CHSH > 2 from p = {}",
                fmt_opt(sweep.i4_threshold),
                fmt_opt(sweep.chsh_threshold)
            );
            let mut out = open(&cfg)?;
            expcli::write_noise(&mut out, &sweep, &cfg)?;
            finish(out)
        }
        Command::Single(a) => {
            let cfg = a.common.config(ExperimentKind::Single);
            let outcome = expcli::run_single(&a.input()?, a.phases()?, &cfg)?;
            match &outcome {
                SingleOutcome::State(r) => eprintln!("single: I4 {:.6}, CHSH {:.6}", r.i4, r.chsh),
                SingleOutcome::Noise(r) => eprintln!("single: p {}, I4 {:.6}, CHSH {:.6}", r.p, r.i4, r.chsh),
            }
            let mut out = open(&cfg)?;
            expcli::write_single(&mut out, &outcome, &cfg)?;
            finish(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { EXIT_IO } else { EXIT_INVALID })
        }
    }
}
