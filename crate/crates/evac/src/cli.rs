//! Argument parsing and subcommand dispatch for the `evac` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use evac_core::adversary::{adversarial_exit, infeasibility_witness, AdversaryReport, Strategy};
use evac_core::{
    simulate_functional, simulate_naive, EnergyBudget, ProblemInstance, ProblemKind, Side,
    SpeedPair,
};
use serde::Serialize;

use crate::config::{Config, TOL_ENV};
use crate::error::{CliError, Result, EXIT_IO, EXIT_OK, EXIT_VERIFY};
use crate::report::{optimize, Algorithm, Params, Problem, SimulateReport};
use crate::strategy_file::load_strategy;
use crate::sweep::{parse_range, EnergyProblem, Scale, SweepParam, SweepSpec};
use crate::verify::{run_suite, VerifyOptions, SUITES, WE_FACTOR_NOTE};

#[derive(Debug, Parser)]
#[command(
    name = "evac",
    version,
    about = "Two-robot wireless evacuation on the line"
)]
pub struct Cli {
    /// Flat key = value file with defaults (tol, grid, points, scale, maxspeed, horizon).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProblemArg {
    Ec,
    Wec,
    We,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AlgoArg {
    Naive,
    Functional,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BudgetArg {
    /// Budget `e`.
    Constant,
    /// Budget `e·d`.
    Linear,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ParamArg {
    Cb,
    E,
    D,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScaleArg {
    Lin,
    Geo,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AdversaryMode {
    Exit,
    Witness,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal SWS speeds in closed form and numerically, with a KKT certificate.
    #[command(allow_negative_numbers = true)]
    Optimize {
        problem: ProblemArg,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        e: Option<f64>,
    },
    /// Simulate one evacuation and print the outcome as JSON.
    #[command(allow_negative_numbers = true)]
    Simulate {
        algo: AlgoArg,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        e: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        d: f64,
        #[arg(long, value_enum, default_value = "positive")]
        side: SideArg,
        /// Speed bound (default 1).
        #[arg(long)]
        maxspeed: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Constraint set to check; inferred from --c / --e when omitted.
        #[arg(long, value_enum)]
        problem: Option<ProblemArg>,
        /// Budget form for --e (naive defaults to linear, functional to constant).
        #[arg(long, value_enum)]
        budget: Option<BudgetArg>,
    },
    /// Write a parameter sweep as CSV.
    #[command(allow_negative_numbers = true)]
    Sweep {
        param: ParamArg,
        /// `lo:hi`.
        #[arg(long)]
        range: String,
        /// Number of samples (default 50).
        #[arg(long)]
        points: Option<usize>,
        /// Sample spacing (default lin).
        #[arg(long, value_enum)]
        scale: Option<ScaleArg>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Program for `e` sweeps.
        #[arg(long, value_enum, default_value = "wec")]
        problem: ProblemArg,
        /// Constant budget for `d` sweeps.
        #[arg(long, default_value_t = 1.0)]
        e: f64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Adversarial exit placement against a strategy.
    #[command(allow_negative_numbers = true)]
    Adversary {
        mode: AdversaryMode,
        /// Strategy file, or `naive` for SWS exploration at speed --s (default b).
        #[arg(long, default_value = "naive")]
        strategy: String,
        #[arg(long)]
        d: Option<f64>,
        /// Speed bound (falls back to --maxspeed, then 1).
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        maxspeed: Option<f64>,
        #[arg(long)]
        horizon: Option<f64>,
    },
    /// Run the self-check suites.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        /// Draws per program for the oracle and kkt suites (default 200).
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

fn require(v: Option<f64>, flag: &str) -> Result<f64> {
    v.ok_or_else(|| CliError::Invalid(format!("missing --{flag}")))
}

/// Writes to standard output; a closed pipe (e.g. `| head`) is not an error.
fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    match out.write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::io("<stdout>", e)),
        _ => Ok(()),
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Parse(format!("serializing output: {e}")))?;
    text.push('\n');
    write_out(out, &text)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let env_tol = std::env::var(TOL_ENV).ok();
    let env_tol = env_tol.as_deref();

    match cli.command {
        Command::Optimize { problem, b, c, e } => {
            let (problem, params) = match problem {
                ProblemArg::Ec => (
                    Problem::Ec,
                    Params::Ec {
                        b: require(b, "b")?,
                        c: require(c, "c")?,
                    },
                ),
                ProblemArg::Wec => (
                    Problem::Wec,
                    Params::Energy {
                        e: require(e, "e")?,
                    },
                ),
                ProblemArg::We => (
                    Problem::We,
                    Params::Energy {
                        e: require(e, "e")?,
                    },
                ),
            };
            let report = optimize(problem, params)?;
            emit_json(out, &report)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }

        Command::Simulate {
            algo,
            s,
            r,
            e,
            c,
            d,
            side,
            maxspeed,
            tol,
            problem,
            budget,
        } => {
            let b = maxspeed.or(config.maxspeed).unwrap_or(1.0);
            let kind = match (problem, c, e) {
                (Some(ProblemArg::Ec), ..) | (None, Some(_), _) => Some(ProblemKind::Ec),
                (Some(ProblemArg::Wec), ..) | (None, None, Some(_)) => Some(ProblemKind::Wec),
                (Some(ProblemArg::We), ..) => Some(ProblemKind::We),
                (None, None, None) => None,
            };
            let budget_of = |e: f64, default: BudgetArg| match budget.unwrap_or(default) {
                BudgetArg::Constant => EnergyBudget::Constant(e),
                BudgetArg::Linear => EnergyBudget::Linear(e),
            };
            let default_budget = match algo {
                AlgoArg::Naive => BudgetArg::Linear,
                AlgoArg::Functional => BudgetArg::Constant,
            };
            let inst = match kind {
                Some(ProblemKind::Ec) => ProblemInstance::ec(b, require(c, "c")?, d)?,
                Some(ProblemKind::Wec) => {
                    ProblemInstance::wec(budget_of(require(e, "e")?, default_budget), d)?
                        .with_max_speed(b)?
                }
                Some(ProblemKind::We) => {
                    ProblemInstance::we(budget_of(require(e, "e")?, default_budget), d)?
                        .with_max_speed(b)?
                }
                None => ProblemInstance::unconstrained(ProblemKind::Ec, b, d)?,
            };
            let inst = inst.with_side(match side {
                SideArg::Positive => Side::Positive,
                SideArg::Negative => Side::Negative,
            });

            let report = match algo {
                AlgoArg::Naive => {
                    let pair = SpeedPair::new(require(s, "s")?, require(r, "r")?)?;
                    SimulateReport {
                        algorithm: Algorithm::Naive,
                        outcome: simulate_naive(pair, &inst),
                        instance: inst,
                        speeds: Some(pair),
                        e: None,
                        tol: None,
                    }
                }
                AlgoArg::Functional => {
                    let e = require(e, "e")?;
                    let tol = config.tolerance(tol, env_tol)?;
                    SimulateReport {
                        algorithm: Algorithm::Functional,
                        outcome: simulate_functional(e, &inst, tol)?,
                        instance: inst,
                        speeds: None,
                        e: Some(e),
                        tol: Some(tol),
                    }
                }
            };
            emit_json(out, &report)?;
            Ok(EXIT_OK)
        }

        Command::Sweep {
            param,
            range,
            points,
            scale,
            out: path,
            problem,
            e,
            tol,
        } => {
            let (lo, hi) = parse_range(&range)?;
            let spec = SweepSpec {
                param: match param {
                    ParamArg::Cb => SweepParam::Cb,
                    ParamArg::E => SweepParam::E,
                    ParamArg::D => SweepParam::D,
                },
                lo,
                hi,
                points: points.or(config.points).unwrap_or(50),
                scale: match scale {
                    Some(ScaleArg::Lin) => Scale::Linear,
                    Some(ScaleArg::Geo) => Scale::Geometric,
                    None => config.scale.unwrap_or_default(),
                },
                out: path,
                problem: match problem {
                    ProblemArg::We => EnergyProblem::We,
                    ProblemArg::Wec => EnergyProblem::Wec,
                    ProblemArg::Ec => {
                        return Err(CliError::Invalid(
                            "e sweeps take --problem wec or we".into(),
                        ))
                    }
                },
                e,
                tol: config.tolerance(tol, env_tol)?,
            };
            let csv = spec.render()?;
            match &spec.out {
                Some(path) => std::fs::write(path, csv).map_err(|e| CliError::io(path, e))?,
                None => write_out(out, &csv)?,
            }
            Ok(EXIT_OK)
        }

        Command::Adversary {
            mode,
            strategy,
            d,
            b,
            c,
            s,
            maxspeed,
            horizon,
        } => {
            let b = b.or(maxspeed).or(config.maxspeed).unwrap_or(1.0);
            let horizon = horizon.or(config.horizon);
            let build = |default_horizon: f64| -> Result<Strategy> {
                if strategy == "naive" {
                    let h = horizon.unwrap_or(default_horizon);
                    Ok(Strategy::simple_wireless(s.unwrap_or(b), b, h)?)
                } else {
                    load_strategy(std::path::Path::new(&strategy))
                }
            };
            match mode {
                AdversaryMode::Exit => {
                    let d = require(d, "d")?;
                    let st = build(10.0 * d / b)?;
                    emit_json(out, &adversarial_exit(&st, d)?)?;
                    Ok(EXIT_OK)
                }
                AdversaryMode::Witness => {
                    let c = require(c, "c")?;
                    let st = build(1000.0 / b)?;
                    match infeasibility_witness(b, c, &st) {
                        Ok(report) => {
                            emit_json(out, &WitnessReport { b, c, report })?;
                            Ok(EXIT_OK)
                        }
                        Err(evac_core::Error::Precondition(msg)) => {
                            Err(CliError::Invalid(msg.to_string()))
                        }
                        Err(evac_core::Error::HorizonTooShort { distance }) => {
                            Err(CliError::Verification(format!(
                                "no violating exit found up to distance {distance}"
                            )))
                        }
                        Err(other) => Err(other.into()),
                    }
                }
            }
        }

        Command::Verify { suite, grid, tol } => {
            let opts = VerifyOptions {
                grid: grid.or(config.grid).unwrap_or(200),
                tol: config.tolerance(tol, env_tol)?,
            };
            let names: Vec<&str> = match &suite {
                Some(name) => vec![name.as_str()],
                None => SUITES.to_vec(),
            };
            let mut all = true;
            let w = |out: &mut dyn Write, line: &str| write_out(out, &format!("{line}\n"));
            for name in names {
                let result = run_suite(name, &opts)?;
                all &= result.passed;
                w(out, &result.to_string())?;
            }
            w(out, WE_FACTOR_NOTE)?;
            Ok(if all { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}

#[derive(Debug, Serialize)]
struct WitnessReport {
    b: f64,
    c: f64,
    report: AdversaryReport,
}
