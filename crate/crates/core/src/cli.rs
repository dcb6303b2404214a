//! Command-line front end.
//!
//! Exit status: 0 success, 1 infeasible bounds (or no regime structure),
//! 2 usage error, 3 I/O error. Numbers printed to stdout carry nine
//! significant digits; files written by `sweep` keep full precision.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::bernoulli::locate_regimes;
use crate::classifier::BinaryClassifier;
use crate::error::RdcError;
use crate::oracle::{grid_search_rdc, OracleConfig};
use crate::solver::{sweep_surface, Problem, RdcPoint, SolverConfig};
use crate::source_file::SourceSpec;
use crate::source_model::{DistortionMeasure, MixtureSource};
use crate::surface::{
    self, check_convexity, check_monotone, ConvexityOptions, Format,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "rdc", version, about = "Rate-distortion-classification solver")]
pub struct Cli {
    /// Worker threads for parallel sweeps (default: available cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one (D, E) point and print it as JSON.
    Solve {
        #[arg(long)]
        source: PathBuf,
        #[arg(long = "d", value_parser = parse_bound, allow_negative_numbers = true)]
        d: f64,
        #[arg(long = "e", value_parser = parse_bound, allow_negative_numbers = true)]
        e: f64,
        /// Include the optimal channel in the output.
        #[arg(long)]
        with_channel: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Solve a grid of (D, E) bounds and write the surface.
    Sweep {
        #[arg(long)]
        source: PathBuf,
        /// `start:end:count` (inclusive) or a single value such as `inf`.
        #[arg(long, value_parser = parse_grid, allow_negative_numbers = true)]
        grid_d: GridSpec,
        #[arg(long, value_parser = parse_grid, allow_negative_numbers = true)]
        grid_e: GridSpec,
        #[arg(long)]
        out: PathBuf,
        /// Output format; defaults to the extension of `--out`.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Leave run metadata (source hash, config, timestamp) out of the file.
        #[arg(long)]
        no_meta: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Locate the regimes of R(D, E) for a binary source at fixed E.
    Bernoulli {
        /// Bern(p) with one class per symbol; ignored when --source is given.
        #[arg(long, value_parser = parse_probability, required_unless_present = "source")]
        p: Option<f64>,
        /// Binary source with Hamming distortion.
        #[arg(long, conflicts_with = "p")]
        source: Option<PathBuf>,
        #[arg(long = "e", value_parser = parse_bound, allow_negative_numbers = true)]
        e: f64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Brute-force grid search over channels (tiny instances only).
    Oracle {
        #[arg(long)]
        source: PathBuf,
        #[arg(long = "d", value_parser = parse_bound, allow_negative_numbers = true)]
        d: f64,
        #[arg(long = "e", value_parser = parse_bound, allow_negative_numbers = true)]
        e: f64,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
        #[arg(long, default_value_t = 1e-4)]
        slack: f64,
    },
    /// Check a stored surface for monotonicity and midpoint convexity.
    Verify {
        #[arg(long)]
        surface: PathBuf,
        /// Problem the surface was solved for; enables off-grid midpoint solves.
        #[arg(long)]
        source: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long)]
    pub inner_tol: Option<f64>,
    #[arg(long)]
    pub max_inner_iters: Option<usize>,
    #[arg(long)]
    pub constraint_tol: Option<f64>,
    #[arg(long)]
    pub multiplier_max: Option<f64>,
    #[arg(long)]
    pub outer_max_iters: Option<usize>,
}

impl SolverArgs {
    pub fn config(&self) -> SolverConfig {
        let d = SolverConfig::default();
        SolverConfig {
            inner_tol: self.inner_tol.unwrap_or(d.inner_tol),
            max_inner_iters: self.max_inner_iters.unwrap_or(d.max_inner_iters),
            constraint_tol: self.constraint_tol.unwrap_or(d.constraint_tol),
            multiplier_max: self.multiplier_max.unwrap_or(d.multiplier_max),
            outer_max_iters: self.outer_max_iters.unwrap_or(d.outer_max_iters),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec(pub Vec<f64>);

/// A nonnegative bound; `inf` drops the constraint.
pub fn parse_bound(s: &str) -> Result<f64, String> {
    let v = match s.trim() {
        "inf" | "+inf" | "infinity" => f64::INFINITY,
        t => t.parse::<f64>().map_err(|e| format!("{s:?}: {e}"))?,
    };
    if v.is_nan() || v < 0.0 {
        return Err(format!("bound must be nonnegative or inf, got {s}"));
    }
    Ok(v)
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
    if !(v > 0.0 && v <= 0.5) {
        return Err(format!("p must lie in (0, 0.5], got {s}"));
    }
    Ok(v)
}

/// `start:end:count` with both ends included, or one bound literal.
pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(GridSpec(vec![parse_bound(single)?])),
        [a, b, n] => {
            let (a, b) = (parse_bound(a)?, parse_bound(b)?);
            let n: usize = n.parse().map_err(|e| format!("grid count {n:?}: {e}"))?;
            if n == 0 || !a.is_finite() || !b.is_finite() {
                return Err("grid ends must be finite and count positive".into());
            }
            if n == 1 {
                return Ok(GridSpec(vec![a]));
            }
            if b <= a {
                return Err("grid end must exceed grid start".into());
            }
            Ok(GridSpec(
                (0..n)
                    .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                    .collect(),
            ))
        }
        _ => Err(format!("grid {s:?} is not start:end:count")),
    }
}

/// Rounds to nine significant digits; non-finite values become strings.
pub fn sig9(v: f64) -> Value {
    if v.is_finite() {
        let rounded: f64 = format!("{v:.8e}").parse().unwrap_or(v);
        json!(rounded)
    } else {
        Value::String(surface::format_float(v))
    }
}

fn round_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => sig9(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(round_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_numbers(v))).collect()),
        other => other,
    }
}

fn point_json(d: f64, e: f64, pt: &RdcPoint, with_channel: bool) -> Value {
    let mut v = json!({
        "d_bound": sig9(d),
        "e_bound": sig9(e),
        "rate_bits": sig9(pt.rate_bits),
        "distortion": sig9(pt.distortion),
        "class_error": sig9(pt.class_error),
        "lambda_d": sig9(pt.lambda_d),
        "lambda_e": sig9(pt.lambda_e),
        "iterations": pt.iterations,
        "converged": pt.converged,
    });
    if with_channel {
        if let Some(k) = &pt.channel {
            v["channel"] = round_numbers(json!(k.to_rows()));
        }
    }
    v
}

fn exit_code(err: &RdcError) -> i32 {
    match err {
        RdcError::Infeasible(_) | RdcError::NoPlateau(_) | RdcError::NonConvergence(_) => {
            EXIT_INFEASIBLE
        }
        RdcError::Io { .. } | RdcError::Parse { .. } => EXIT_IO,
        RdcError::Dimension(_)
        | RdcError::InvalidDistribution(_)
        | RdcError::InvalidArgument(_)
        | RdcError::InstanceTooLarge { .. } => EXIT_USAGE,
    }
}

fn load_problem(path: &std::path::Path) -> Result<(SourceSpec, Problem), RdcError> {
    let spec = SourceSpec::load(path)?;
    let problem = spec.to_problem()?;
    Ok((spec, problem))
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<(), RdcError> {
    let text = serde_json::to_string_pretty(v).unwrap_or_default();
    writeln!(out, "{text}").map_err(|e| RdcError::io("<stdout>", e))
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), RdcError> {
    match cmd {
        Command::Solve {
            source,
            d,
            e,
            with_channel,
            solver,
        } => {
            let (_, problem) = load_problem(&source)?;
            let pt = problem.solve(d, e, &solver.config())?;
            print_json(out, &point_json(d, e, &pt, with_channel))
        }
        Command::Sweep {
            source,
            grid_d,
            grid_e,
            out: path,
            format,
            no_meta,
            solver,
        } => {
            let (spec, problem) = load_problem(&source)?;
            let cfg = solver.config();
            let mut surface = sweep_surface(&problem, &grid_d.0, &grid_e.0, &cfg)?;
            if !no_meta {
                surface.meta.source_hash = Some(spec.fingerprint());
                surface.meta.config = Some(cfg);
                surface.meta.timestamp = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .ok()
                    .map(|d| d.as_secs());
            }
            let format = match format {
                Some(FormatArg::Csv) => Format::Csv,
                Some(FormatArg::Json) => Format::Json,
                None => Format::from_path(&path),
            };
            surface::export(&surface, &path, format, !no_meta)?;
            let infeasible = surface
                .cells()
                .iter()
                .filter(|c| c.status == surface::CellStatus::Infeasible)
                .count();
            print_json(
                out,
                &json!({
                    "cells": surface.cells().len(),
                    "infeasible": infeasible,
                    "out": path.display().to_string(),
                }),
            )
        }
        Command::Bernoulli { p, source, e, solver } => {
            let problem = match (source, p) {
                (Some(path), _) => load_problem(&path)?.1,
                (None, Some(p)) => Problem::new(
                    MixtureSource::bernoulli_class_symbol(p)?,
                    DistortionMeasure::hamming(2),
                    BinaryClassifier::new(2, [0])?,
                )?,
                (None, None) => {
                    return Err(RdcError::InvalidArgument("give --p or --source".into()))
                }
            };
            let regimes = locate_regimes(&problem, e, &solver.config())?;
            let sweep: Vec<Value> = regimes
                .sweep
                .iter()
                .map(|s| json!([sig9(s.d), s.rate_bits.map_or(Value::Null, sig9)]))
                .collect();
            print_json(
                out,
                &json!({
                    "p": sig9(regimes.p),
                    "e_bound": sig9(regimes.e_bound),
                    "d1": sig9(regimes.d1),
                    "d2": sig9(regimes.d2),
                    "plateau_rate_bits": regimes.plateau_rate_bits.map_or(Value::Null, sig9),
                    "sweep": sweep,
                }),
            )
        }
        Command::Oracle {
            source,
            d,
            e,
            resolution,
            slack,
        } => {
            let (_, problem) = load_problem(&source)?;
            let res = grid_search_rdc(&problem, d, e, &OracleConfig { resolution, slack })?;
            let Some(rate) = res.rate_bits else {
                return Err(RdcError::Infeasible(format!(
                    "no grid channel at resolution {resolution} meets D = {d}, E = {e}"
                )));
            };
            print_json(
                out,
                &json!({
                    "d_bound": sig9(d),
                    "e_bound": sig9(e),
                    "rate_bits": sig9(rate),
                    "resolution": resolution,
                    "channels_searched": res.channels_searched,
                    "channel": res.channel.map(|k| round_numbers(json!(k.to_rows()))),
                }),
            )
        }
        Command::Verify {
            surface: path,
            source,
            pairs,
            seed,
            solver,
        } => {
            let surface = surface::import(&path)?;
            let problem = source.map(|p| load_problem(&p)).transpose()?.map(|x| x.1);
            let cfg = solver.config();
            let solve = |d: f64, e: f64| problem.as_ref()?.solve(d, e, &cfg).ok().map(|p| p.rate_bits);
            let mono = check_monotone(&surface);
            let conv = check_convexity(
                &surface,
                &ConvexityOptions { pairs, seed },
                problem.is_some().then_some(&solve as &(dyn Fn(f64, f64) -> Option<f64> + Sync)),
            );
            print_json(
                out,
                &round_numbers(json!({
                    "monotonicity": mono,
                    "convexity": conv,
                })),
            )
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = match cli.jobs {
        Some(0) => Err(RdcError::InvalidArgument("--jobs must be positive".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli.command, &mut buf)),
            Err(e) => Err(RdcError::InvalidArgument(e.to_string())),
        },
        None => execute(cli.command, &mut buf),
    };
    let result = result.and_then(|()| out.write_all(&buf).map_err(|e| RdcError::io("<stdout>", e)));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(parse_bound("inf").unwrap(), f64::INFINITY);
        assert_eq!(parse_bound("0.25").unwrap(), 0.25);
        assert!(parse_bound("-1").is_err());
        assert!(parse_bound("nan").is_err());
        assert!(parse_bound("x").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap().0, vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("inf").unwrap().0, vec![f64::INFINITY]);
        assert_eq!(parse_grid("0.2:0.2:1").unwrap().0, vec![0.2]);
        assert!(parse_grid("1:0:3").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:inf:3").is_err());
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.500_138_284_123), json!(0.500138284));
        assert_eq!(sig9(1.0), json!(1.0));
        assert_eq!(sig9(f64::INFINITY), json!("inf"));
        assert_eq!(sig9(1.234_567_891_23e-7), json!(1.23456789e-7));
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(["rdc", "solve", "--source", "x.json", "--d", "-1", "--e", "inf"], &mut out, &mut err);
        assert_eq!(code, EXIT_USAGE);
        let code = run(["rdc", "frobnicate"], &mut out, &mut err);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn missing_source_exits_three() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            ["rdc", "solve", "--source", "/nonexistent/s.json", "--d", "0.1", "--e", "inf"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_IO);
        assert!(String::from_utf8(err).unwrap().contains("/nonexistent/s.json"));
    }
}
