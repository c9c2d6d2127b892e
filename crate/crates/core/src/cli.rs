//! Command-line front end.
//!
//! JSON output (`--format json`) is the machine interface; the human format
//! is for reading only and may change.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::data;
use crate::error::{Error, Result};
use crate::fit::{fit_mle, FitOptions, FitResult};
use crate::latent::{sample, seeded_stream};
use crate::model::ModelParams;
use crate::moments::{correlation_matrix, general_moment, mean, variance, MomentOrder};

/// Seed used by `simulate` when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_917;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
/// Also used by the argument parser for malformed command lines.
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "mvweibull",
    version,
    about = "Multivariate Weibull distribution toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the model to a censored dataset by maximum likelihood.
    Fit(FitArgs),
    /// Draw samples and write them as CSV.
    Simulate(SimulateArgs),
    /// Print closed-form moments.
    Moments(MomentsArgs),
    /// Evaluate the survival function or density at a point.
    Eval(EvalArgs),
    /// Write the embedded rat tumor dataset as CSV.
    Rats,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Dimension; broadcasts single-valued --scales/--shapes.
    #[arg(long)]
    pub dims: Option<usize>,
    /// Association parameter, 0 < alpha <= 1.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Comma-separated scales.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub scales: Vec<f64>,
    /// Comma-separated shapes.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub shapes: Vec<f64>,
}

impl ParamArgs {
    fn is_empty(&self) -> bool {
        self.alpha.is_none() && self.scales.is_empty() && self.shapes.is_empty()
    }

    pub fn to_params(&self) -> Result<ModelParams> {
        let alpha = self
            .alpha
            .ok_or_else(|| Error::Parse("--alpha is required".into()))?;
        if self.scales.is_empty() || self.shapes.is_empty() {
            return Err(Error::Parse("--scales and --shapes are required".into()));
        }
        let broadcast = |v: &[f64], what: &str| -> Result<Vec<f64>> {
            match self.dims {
                Some(n) if v.len() == 1 => Ok(vec![v[0]; n]),
                Some(n) if v.len() != n => Err(Error::Schema(format!(
                    "--{what} has {} values but --dims is {n}",
                    v.len()
                ))),
                _ => Ok(v.to_vec()),
            }
        };
        ModelParams::new(
            alpha,
            broadcast(&self.scales, "scales")?,
            broadcast(&self.shapes, "shapes")?,
        )
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV file with header t1..tn,c1..cn.
    #[arg(long)]
    pub data: PathBuf,
    /// Flag value (0 or 1) that marks a censored time.
    #[arg(long, default_value_t = 1)]
    pub censored_value: u8,
    /// Optional starting values.
    #[command(flatten)]
    pub init: ParamArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Number of draws.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// RNG seed; the same seed gives the same output.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Comma-separated exponents of a product moment.
    #[arg(long, value_delimiter = ',')]
    pub exponents: Vec<f64>,
    /// Print the correlation matrix.
    #[arg(long)]
    pub correlations: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Comma-separated point.
    #[arg(long, value_delimiter = ',', required = true)]
    pub at: Vec<f64>,
    /// Print the joint survival function. Without --survival or --pdf, both are printed.
    #[arg(long)]
    pub survival: bool,
    /// Print the joint density.
    #[arg(long)]
    pub pdf: bool,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Parse(_) | Error::Schema(_) => EXIT_PARSE,
        Error::Domain(_) => EXIT_DOMAIN,
        Error::Numeric(_) | Error::NotPositiveDefinite { .. } => EXIT_NUMERIC,
    }
}

/// Runs a parsed command, writing output to `--out` or `stdout` and error
/// messages to `stderr`. Returns the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    // Output is buffered so that a failing command leaves no partial file.
    let mut buffer = Vec::new();
    let outcome = dispatch(cli, &mut buffer).and_then(|outcome| {
        match &cli.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                w.write_all(&buffer)?;
                w.flush()?;
            }
            None => stdout.write_all(&buffer)?,
        }
        Ok(outcome)
    });
    match outcome {
        Ok(Outcome::Success) => EXIT_OK,
        Ok(Outcome::Failed(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_NUMERIC
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

enum Outcome {
    Success,
    /// Output was written but the command did not achieve its purpose.
    Failed(String),
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    match &cli.command {
        Command::Fit(args) => cmd_fit(args, cli.format, out),
        Command::Simulate(args) => cmd_simulate(args, out).map(|_| Outcome::Success),
        Command::Moments(args) => cmd_moments(args, cli.format, out).map(|_| Outcome::Success),
        Command::Eval(args) => cmd_eval(args, cli.format, out).map(|_| Outcome::Success),
        Command::Rats => data::write_csv(out, &data::rats()).map(|_| Outcome::Success),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Numeric(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn cmd_fit(args: &FitArgs, format: Format, out: &mut dyn Write) -> Result<Outcome> {
    let file = File::open(&args.data)?;
    let dataset = data::read_csv(BufReader::new(file), args.censored_value)?;
    let init = if args.init.is_empty() {
        None
    } else {
        Some(args.init.to_params()?)
    };
    let result = fit_mle(&dataset, init.as_ref(), &FitOptions::default())?;
    match format {
        Format::Json => write_json(out, &result)?,
        Format::Human => write_fit_table(out, &result)?,
    }
    if result.is_usable() {
        Ok(Outcome::Success)
    } else {
        let reason = if result.diagnostics.is_empty() {
            "fit is not usable".to_string()
        } else {
            result.diagnostics.join("; ")
        };
        Ok(Outcome::Failed(reason))
    }
}

fn write_fit_table(out: &mut dyn Write, r: &FitResult) -> Result<()> {
    let values = crate::fit::params_to_vec(&r.estimates);
    let values = if r.estimates.dim() == 1 {
        &values[1..]
    } else {
        &values[..]
    };
    writeln!(out, "{:<16} {:>14} {:>14}", "parameter", "estimate", "std. error")?;
    for (i, (name, v)) in r.parameter_names.iter().zip(values).enumerate() {
        let se = r
            .standard_errors
            .as_ref()
            .map_or("-".to_string(), |s| format!("{:.3}", s[i]));
        writeln!(out, "{name:<16} {v:>14.3} {se:>14}")?;
    }
    writeln!(out, "log-likelihood   {:.6}", r.log_likelihood)?;
    writeln!(
        out,
        "converged        {} ({} iterations, {} evaluations)",
        r.converged, r.iterations, r.evaluations
    )?;
    for d in &r.diagnostics {
        writeln!(out, "note: {d}")?;
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let params = args.params.to_params()?;
    let mut rng = seeded_stream(args.seed, 0);
    let points = sample(&params, &mut rng, args.count)?;
    data::write_points(out, &points)
}

fn cmd_moments(args: &MomentsArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let p = args.params.to_params()?;
    let n = p.dim();
    let means = (0..n).map(|i| mean(&p, i)).collect::<Result<Vec<_>>>()?;
    let variances = (0..n).map(|i| variance(&p, i)).collect::<Result<Vec<_>>>()?;
    let moment = if args.exponents.is_empty() {
        None
    } else {
        let order = MomentOrder::new(args.exponents.clone())?;
        Some(general_moment(&p, &order)?)
    };
    let correlations = if args.correlations {
        Some(correlation_matrix(&p)?)
    } else {
        None
    };
    match format {
        Format::Json => {
            let mut doc = json!({ "params": p, "means": means, "variances": variances });
            if let Some(m) = moment {
                doc["moment"] = json!({ "exponents": args.exponents, "value": m });
            }
            if let Some(c) = &correlations {
                doc["correlations"] = json!(c);
            }
            write_json(out, &doc)?;
        }
        Format::Human => {
            writeln!(out, "{:<6} {:>16} {:>16}", "coord", "mean", "variance")?;
            for i in 0..n {
                writeln!(out, "{:<6} {:>16.6} {:>16.6}", i + 1, means[i], variances[i])?;
            }
            if let Some(m) = moment {
                writeln!(out, "E[prod x^{:?}] = {m}", args.exponents)?;
            }
            if let Some(c) = &correlations {
                writeln!(out, "correlations")?;
                for row in c {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:>8.4}")).collect();
                    writeln!(out, "{}", cells.join(" "))?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_eval(args: &EvalArgs, format: Format, out: &mut dyn Write) -> Result<()> {
    let p = args.params.to_params()?;
    let both = !args.survival && !args.pdf;
    let survival = if args.survival || both {
        Some(p.survival(&args.at)?)
    } else {
        None
    };
    let pdf = if args.pdf || (both && args.at.iter().all(|v| *v > 0.0)) {
        Some(p.pdf(&args.at)?)
    } else {
        None
    };
    match format {
        Format::Json => {
            let mut doc = json!({ "point": args.at });
            if let Some(s) = survival {
                doc["survival"] = json!(s);
            }
            if let Some(f) = pdf {
                doc["pdf"] = json!(f);
            }
            write_json(out, &doc)?;
        }
        Format::Human => {
            if let Some(s) = survival {
                writeln!(out, "survival {s}")?;
            }
            if let Some(f) = pdf {
                writeln!(out, "pdf      {f}")?;
            }
        }
    }
    Ok(())
}
