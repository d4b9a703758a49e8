//! Command-line front end. [`run`] never panics on bad input and never calls
//! `process::exit`; it returns the exit code: `0` feasible or complete,
//! `2` infeasible, `1` usage, input, budget or internal error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::farey::{farey_neighbors, farey_sequence, Bracket, FareyOrder};
use crate::mediant_chain::{subdivide_interval, GapStats, Refinement};
use crate::rational::{parse_real, Rational, DEFAULT_PRECISION};
use crate::selftest::run_selftest;
use crate::simultaneous::{
    brute_force_solve_with, check_solution_with, compare, compose_solve_with, dirichlet_solve_with,
    epsilon_threshold, geometric_grid, linear_grid, parse_constraints, parse_grid, CheckReport,
    ComposeOptions, ConstraintSet, Feasibility, SolveOptions, Strictness, DEFAULT_MAX_SCAN,
};

/// Environment variable capping every denominator scan.
pub const MAX_SCAN_ENV: &str = "FAREY_APPROX_MAX_SCAN";

const DEFAULT_MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "farey-approx",
    version,
    about = "Exact simultaneous rational approximation and Farey tools"
)]
struct Cli {
    /// Decimal digits kept for named constants (sqrt2, sqrt3, sqrt5, phi, e, pi).
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print F_N, one fraction per line.
    Farey {
        #[arg(long)]
        order: u64,
        /// Smallest element to print.
        #[arg(long)]
        from: Option<String>,
        /// Largest element to print.
        #[arg(long)]
        to: Option<String>,
    },
    /// Locate x in F_N.
    Neighbors {
        #[arg(long)]
        x: String,
        #[arg(long)]
        order: u64,
    },
    /// Refine [lo, hi] by mediant chains until every gap is small enough.
    Subdivide {
        #[arg(long)]
        lo: String,
        #[arg(long)]
        hi: String,
        #[arg(long)]
        order: u64,
        #[arg(long)]
        gap: String,
        #[arg(long)]
        max_denom: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
        max_points: usize,
    },
    /// Find a common denominator meeting every error bound.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value_t = SolveMethod::Brute)]
        method: SolveMethod,
        /// Require strict error inequalities.
        #[arg(long)]
        strict: bool,
    },
    /// Smallest q < T^n with every ||q x_i|| <= 1/T.
    Dirichlet {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "T")]
        t: u64,
    },
    /// Feasibility over a descending grid of epsilons.
    Sweep {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Emit CSV rows instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Constrained solver and Dirichlet baseline side by side.
    Compare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        epsilon: String,
        /// Defaults to the least T with 1/T <= eps t.
        #[arg(long = "T")]
        t: Option<u64>,
    },
    /// Run the packaged property and cross-checks.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMethod {
    Brute,
    Compose,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Comma-separated, strictly descending.
    #[arg(long, conflicts_with_all = ["eps_max", "eps_min", "points", "geometric"])]
    grid: Option<String>,
    #[arg(long, requires_all = ["eps_min", "points"])]
    eps_max: Option<String>,
    #[arg(long, requires = "eps_max")]
    eps_min: Option<String>,
    #[arg(long, requires = "eps_max")]
    points: Option<usize>,
    /// Constant ratio instead of constant step.
    #[arg(long, requires = "eps_max")]
    geometric: bool,
}

/// Adds `precision` ahead of the body's own fields.
#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    precision: u32,
    #[serde(flatten)]
    body: &'a T,
}

enum Outcome {
    Done,
    Infeasible,
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = dispatch(&cli, &mut buf);
    // Output is assembled first so a failure never leaves a partial document.
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return 1;
    }
    match result {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::Infeasible) => 2,
        Err(Error::Infeasible(msg)) => {
            let _ = writeln!(err, "infeasible: {msg}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>) -> Result<Outcome> {
    let prec = cli.precision;
    match &cli.command {
        Command::Farey { order, from, to } => {
            let order = FareyOrder::new(*order)?;
            let from = from.as_deref().map(|s| parse_real(s, prec)).transpose()?;
            let to = to.as_deref().map(|s| parse_real(s, prec)).transpose()?;
            for x in farey_sequence(order) {
                if from.as_ref().is_some_and(|f| &x < f) {
                    continue;
                }
                if to.as_ref().is_some_and(|t| &x > t) {
                    break;
                }
                line(out, &x.to_string());
            }
            Ok(Outcome::Done)
        }
        Command::Neighbors { x, order } => {
            let x = parse_real(x, prec)?;
            let order = FareyOrder::new(*order)?;
            let bracket = farey_neighbors(&x, order)?;
            let (kind, value, left, right) = match bracket {
                Bracket::Exact { value } => ("exact", Some(value.clone()), value.clone(), value),
                Bracket::Pair { pair } => ("pair", None, pair.left().clone(), pair.right().clone()),
            };
            #[derive(Serialize)]
            struct Body<'a> {
                x: &'a Rational,
                order: FareyOrder,
                kind: &'static str,
                #[serde(skip_serializing_if = "Option::is_none")]
                value: Option<Rational>,
                left: Rational,
                right: Rational,
            }
            let body = Body {
                x: &x,
                order,
                kind,
                value,
                left,
                right,
            };
            emit_json(out, prec, &body)?;
            Ok(Outcome::Done)
        }
        Command::Subdivide {
            lo,
            hi,
            order,
            gap,
            max_denom,
            max_points,
        } => {
            let lo = parse_real(lo, prec)?;
            let hi = parse_real(hi, prec)?;
            let gap = parse_real(gap, prec)?;
            let order = FareyOrder::new(*order)?;
            let sub = subdivide_interval(
                &lo,
                &hi,
                order,
                &gap,
                max_denom.unwrap_or(u64::MAX),
                *max_points,
            )?;
            for p in &sub.points {
                line(out, &p.to_string());
            }
            #[derive(Serialize)]
            struct Trailer<'a> {
                gap_bound: &'a Rational,
                denom_bound: u64,
                #[serde(flatten)]
                stats: GapStats,
                refinements: &'a [Refinement],
            }
            let trailer = Trailer {
                gap_bound: &sub.gap_bound,
                denom_bound: sub.denom_bound,
                stats: sub.stats(),
                refinements: &sub.refinements,
            };
            emit_json_line(out, prec, &trailer)?;
            Ok(Outcome::Done)
        }
        Command::Solve {
            input,
            epsilon,
            method,
            strict,
        } => {
            let cs = read_constraints(input, prec)?;
            let eps = parse_real(epsilon, prec)?;
            let strictness = if *strict {
                Strictness::Strict
            } else {
                Strictness::NonStrict
            };
            match method {
                SolveMethod::Brute => {
                    let opts = SolveOptions {
                        max_scan: max_scan()?,
                        strictness,
                    };
                    let result = brute_force_solve_with(&cs, &eps, &opts)?;
                    let check = match result.solution() {
                        Some(s) => Some(check_solution_with(&cs, &eps, s.q, &s.ps, strictness)?),
                        None => None,
                    };
                    #[derive(Serialize)]
                    struct Body<'a> {
                        epsilon: &'a Rational,
                        method: &'static str,
                        strictness: Strictness,
                        #[serde(flatten)]
                        result: &'a Feasibility,
                        check: Option<CheckReport>,
                    }
                    emit_json(
                        out,
                        prec,
                        &Body {
                            epsilon: &eps,
                            method: "brute",
                            strictness,
                            result: &result,
                            check,
                        },
                    )?;
                    Ok(if result.is_feasible() {
                        Outcome::Done
                    } else {
                        Outcome::Infeasible
                    })
                }
                SolveMethod::Compose => {
                    let opts = ComposeOptions {
                        strictness,
                        ..ComposeOptions::default()
                    };
                    let outcome = compose_solve_with(&cs, &eps, &opts)?;
                    #[derive(Serialize)]
                    struct Body<'a, T: Serialize> {
                        epsilon: &'a Rational,
                        method: &'static str,
                        strictness: Strictness,
                        #[serde(flatten)]
                        outcome: &'a T,
                    }
                    emit_json(
                        out,
                        prec,
                        &Body {
                            epsilon: &eps,
                            method: "compose",
                            strictness,
                            outcome: &outcome,
                        },
                    )?;
                    Ok(if outcome.satisfies_constraints {
                        Outcome::Done
                    } else {
                        Outcome::Infeasible
                    })
                }
            }
        }
        Command::Dirichlet { input, t } => {
            let cs = read_constraints(input, prec)?;
            let opts = SolveOptions {
                max_scan: max_scan()?,
                ..SolveOptions::default()
            };
            let solution = dirichlet_solve_with(&cs.xs(), *t, &opts)?;
            #[derive(Serialize)]
            struct Body<'a, T: Serialize> {
                #[serde(rename = "T")]
                t: u64,
                solution: &'a T,
            }
            emit_json(
                out,
                prec,
                &Body {
                    t: *t,
                    solution: &solution,
                },
            )?;
            Ok(Outcome::Done)
        }
        Command::Sweep { input, grid, csv } => {
            let cs = read_constraints(input, prec)?;
            let grid = build_grid(grid, prec)?;
            let opts = SolveOptions {
                max_scan: max_scan()?,
                ..SolveOptions::default()
            };
            let report = epsilon_threshold(&cs, &grid, &opts)?;
            if *csv {
                out.extend_from_slice(report.to_csv().as_bytes());
            } else {
                emit_json(out, prec, &report)?;
            }
            Ok(Outcome::Done)
        }
        Command::Compare { input, epsilon, t } => {
            let cs = read_constraints(input, prec)?;
            let eps = parse_real(epsilon, prec)?;
            let opts = SolveOptions {
                max_scan: max_scan()?,
                ..SolveOptions::default()
            };
            let report = compare(&cs, &eps, *t, &opts)?;
            emit_json(out, prec, &report)?;
            Ok(Outcome::Done)
        }
        Command::Selftest => {
            let report = run_selftest();
            out.extend_from_slice(report.render().as_bytes());
            if report.passed() {
                Ok(Outcome::Done)
            } else {
                Err(Error::Internal(format!(
                    "selftest failed: {}",
                    report.failures().join("; ")
                )))
            }
        }
    }
}

fn line(out: &mut Vec<u8>, s: &str) {
    out.extend_from_slice(s.as_bytes());
    out.push(b'\n');
}

fn emit_json<T: Serialize>(out: &mut Vec<u8>, precision: u32, body: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(&Envelope { precision, body })
        .map_err(|e| Error::Internal(format!("cannot serialize output: {e}")))?;
    line(out, &text);
    Ok(())
}

fn emit_json_line<T: Serialize>(out: &mut Vec<u8>, precision: u32, body: &T) -> Result<()> {
    let text = serde_json::to_string(&Envelope { precision, body })
        .map_err(|e| Error::Internal(format!("cannot serialize output: {e}")))?;
    line(out, &text);
    Ok(())
}

fn read_constraints(path: &Path, precision: u32) -> Result<ConstraintSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_constraints(&text, precision)
        .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn build_grid(args: &GridArgs, precision: u32) -> Result<Vec<Rational>> {
    if let Some(text) = &args.grid {
        return parse_grid(text, precision);
    }
    let (Some(max), Some(min), Some(points)) = (&args.eps_max, &args.eps_min, args.points) else {
        return Err(Error::invalid(
            "sweep needs --grid or all of --eps-max, --eps-min and --points",
        ));
    };
    let max = parse_real(max, precision)?;
    let min = parse_real(min, precision)?;
    if args.geometric {
        geometric_grid(&max, &min, points)
    } else {
        linear_grid(&max, &min, points)
    }
}

fn max_scan() -> Result<u64> {
    match std::env::var(MAX_SCAN_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "{MAX_SCAN_ENV} must be a positive integer, got {v:?}"
                ))
            }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_SCAN),
        Err(e) => Err(Error::invalid(format!("{MAX_SCAN_ENV}: {e}"))),
    }
}
