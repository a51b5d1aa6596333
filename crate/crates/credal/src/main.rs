//! Command-line surface for the credal engine.
//!
//! Subcommands read and emit the JSON wire forms of the library; exit code 0
//! means every assertion passed, 1 means an assertion failed (e.g. a verdict
//! of "dependent" or a theorem counterexample), and 2 means bad input or
//! configuration.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use credal::harness::{self, TrialConfig};
use credal::hull::SeparatingTable;
use credal::independence::{self, peng_product, IndependenceVerdict, ProductOrder};
use credal::json as wire;
use credal::maximality;
use credal::{Error, Mode, Rat, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Rational,
    Float,
}

impl ModeArg {
    fn mode(self) -> Mode {
        match self {
            ModeArg::Rational => Mode::Rational,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Parser)]
#[command(name = "credal", version, about = "Sublinear-expectation calculus over finite outcome spaces")]
struct Cli {
    /// Arithmetic mode: exact rationals or f64 with tolerances.
    #[arg(long, global = true, value_enum, default_value = "rational")]
    mode: ModeArg,
    /// Absolute tolerance for float-mode comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a sublinear expectation: {"space": ..., "table": ...} -> value.
    Eval {
        /// Input JSON file (stdin when omitted).
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Form the Peng product of {"x": ..., "y": ...} in the given order.
    Product {
        #[arg(long)]
        input: Option<PathBuf>,
        /// y-from-x or x-from-y.
        #[arg(long, default_value = "y-from-x")]
        order: String,
    },
    /// Certify or refute independence of a joint distribution in one order.
    CheckIndependence {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "y-from-x")]
        order: String,
    },
    /// Certify or refute maximality of a distribution.
    CheckMaximal {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run the randomized theorem suite (rational mode only).
    VerifyTheorem {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Trials for the forward direction over maximal pairs.
        #[arg(long, default_value_t = 200)]
        forward_trials: usize,
    },
    /// Re-derive the fixed worked examples and report each check.
    ReproduceExamples,
    /// Search for joints that weak independence fails to falsify but the full
    /// certificate refutes; exploratory, never an assertion failure.
    ProbeWeak {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> credal::Result<ExitCode> {
    let (report, failed) = match &cli.command {
        Command::Eval { input } => {
            let v = read_input(input)?;
            let report = match cli.mode.mode() {
                Mode::Rational => cmd_eval::<Rat>(&v)?,
                Mode::Float => cmd_eval::<f64>(&v)?,
            };
            (report, false)
        }
        Command::Product { input, order } => {
            let v = read_input(input)?;
            let order = wire::order_from_str(order)?;
            let report = match cli.mode.mode() {
                Mode::Rational => cmd_product::<Rat>(&v, order)?,
                Mode::Float => cmd_product::<f64>(&v, order)?,
            };
            (report, false)
        }
        Command::CheckIndependence { input, order } => {
            let v = read_input(input)?;
            let order = wire::order_from_str(order)?;
            let report = match cli.mode.mode() {
                Mode::Rational => cmd_check_independence::<Rat>(&v, order, cli.tol)?,
                Mode::Float => cmd_check_independence::<f64>(&v, order, cli.tol)?,
            };
            let failed = report["independent"] != Value::Bool(true);
            (report, failed)
        }
        Command::CheckMaximal { input } => {
            let v = read_input(input)?;
            let report = match cli.mode.mode() {
                Mode::Rational => cmd_check_maximal::<Rat>(&v)?,
                Mode::Float => cmd_check_maximal::<f64>(&v)?,
            };
            let failed = report["maximal"] != Value::Bool(true);
            (report, failed)
        }
        Command::VerifyTheorem { trials, seed, forward_trials } => {
            if cli.mode.mode() != Mode::Rational {
                return Err(Error::InvalidInput(
                    "verify-theorem requires --mode rational".into(),
                ));
            }
            cmd_verify_theorem(*trials, *seed, *forward_trials)?
        }
        Command::ReproduceExamples => cmd_reproduce_examples()?,
        Command::ProbeWeak { trials, seed } => {
            let config = TrialConfig { trials: *trials, seed: *seed, ..Default::default() };
            let report = harness::probe_weak_vs_full(&config)?;
            let out = json!({
                "trials": report.trials,
                "skippedByGuard": report.skipped_guard,
                "wallMs": report.wall_ms as u64,
                "candidates": report.candidates.iter().map(|c| json!({
                    "trial": c.trial,
                    "order": wire::order_to_str(c.order),
                    "weakPairsTried": c.weak_pairs_tried,
                    "instance": serde_json::from_str::<Value>(&c.instance_json)
                        .unwrap_or(Value::Null),
                })).collect::<Vec<_>>(),
            });
            (out, false)
        }
    };
    write_output(cli.out.as_deref(), &report)?;
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn read_input(path: &Option<PathBuf>) -> credal::Result<Value> {
    let text = match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", p.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::InvalidInput(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad JSON: {e}")))
}

fn write_output(path: Option<&std::path::Path>, report: &Value) -> credal::Result<()> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    match path {
        Some(p) => fs::write(p, text + "\n")
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn field<'a>(v: &'a Value, name: &str) -> credal::Result<&'a Value> {
    v.get(name)
        .ok_or_else(|| Error::InvalidInput(format!("input must have {name:?}")))
}

fn cmd_eval<T: Scalar>(v: &Value) -> credal::Result<Value> {
    let space = wire::space_from_json::<T>(field(v, "space")?)?;
    let table = wire::table_from_json(space.omega(), field(v, "table")?)?;
    let value = space.eval(&table)?;
    Ok(json!({
        "mode": mode_str(T::MODE),
        "value": wire::num_to_json(&value),
    }))
}

fn cmd_product<T: Scalar>(v: &Value, order: ProductOrder) -> credal::Result<Value> {
    let d_x = wire::distribution_from_json::<T>(field(v, "x")?)?;
    let d_y = wire::distribution_from_json::<T>(field(v, "y")?)?;
    let joint = peng_product(&d_x, &d_y, order)?;
    Ok(json!({
        "mode": mode_str(T::MODE),
        "order": wire::order_to_str(order),
        "joint": wire::joint_to_json(&joint),
    }))
}

fn witness_json<T: Scalar>(w: &SeparatingTable<T>) -> Value {
    json!({
        "table": wire::table_to_json(&w.table),
        "lhsValue": wire::num_to_json(&w.lhs_value),
        "rhsValue": wire::num_to_json(&w.rhs_value),
    })
}

fn cmd_check_independence<T: Scalar>(
    v: &Value,
    order: ProductOrder,
    tol: f64,
) -> credal::Result<Value> {
    let joint = wire::joint_from_json::<T>(v)?;
    let verdict = independence::is_independent(&joint, order)?;
    let out = match verdict {
        IndependenceVerdict::Independent { mode } => json!({
            "independent": true,
            "mode": mode_str(mode),
            "order": wire::order_to_str(order),
        }),
        IndependenceVerdict::Dependent { mode, witness } => {
            // in float mode a sub-tolerance gap does not count as a refutation
            let gap = (witness.lhs_value.to_f64() - witness.rhs_value.to_f64()).abs();
            let within_tol = mode == Mode::Float && gap <= tol;
            json!({
                "independent": within_tol,
                "withinTolerance": within_tol,
                "mode": mode_str(mode),
                "order": wire::order_to_str(order),
                "witness": witness_json(&witness),
            })
        }
    };
    Ok(out)
}

fn cmd_check_maximal<T: Scalar>(v: &Value) -> credal::Result<Value> {
    let d = wire::distribution_from_json::<T>(v)?;
    let cert = maximality::is_maximal(&d)?;
    Ok(wire::maximality_to_json(&cert))
}

fn cmd_verify_theorem(
    trials: usize,
    seed: u64,
    forward_trials: usize,
) -> credal::Result<(Value, bool)> {
    let config = TrialConfig { trials, seed, ..Default::default() };
    let report = harness::verify_theorem(&config)?;
    let forward = harness::verify_forward(forward_trials, seed.wrapping_add(1), 3)?;
    let counterexamples: Vec<Value> = report
        .records
        .iter()
        .filter(|r| r.counterexample.is_some())
        .map(|r| {
            json!({
                "trial": r.trial,
                "reason": r.counterexample,
                "instance": r.instance_json.as_ref()
                    .and_then(|s| serde_json::from_str::<Value>(s).ok()),
            })
        })
        .collect();
    let failed = !report.passed() || !forward.passed();
    let out = json!({
        "mode": "rational",
        "trials": report.trials,
        "seed": seed,
        "mutuallyIndependentTrials": report.mutual_count,
        "discardedSamples": report.discarded,
        "counterexampleCount": report.counterexamples,
        "counterexamples": counterexamples,
        "wallMs": report.wall_ms as u64,
        "forward": {
            "trials": forward.trials,
            "failures": forward.failures,
            "wallMs": forward.wall_ms as u64,
        },
        "passed": !failed,
    });
    Ok((out, failed))
}

fn cmd_reproduce_examples() -> credal::Result<(Value, bool)> {
    let mut sections = Vec::new();
    let mut all_ok = true;
    let mut push = |name: &str, report: harness::ExampleReport| {
        all_ok &= report.passed();
        sections.push(json!({
            "example": name,
            "passed": report.passed(),
            "checks": report.checks.iter().map(|(label, ok)| json!({
                "check": label,
                "passed": ok,
            })).collect::<Vec<_>>(),
        }));
    };
    push("x-times-y-squared asymmetry", harness::reproduce_example_xy2()?);
    push("maximal product {0} x {1}", harness::reproduce_maximal_product(&[0], &[1])?);
    push(
        "maximal product {-1,1} x {0,2}",
        harness::reproduce_maximal_product(&[-1, 1], &[0, 2])?,
    );
    push(
        "maximal product {1,2,3} x {5}",
        harness::reproduce_maximal_product(&[1, 2, 3], &[5])?,
    );
    Ok((json!({ "examples": sections, "passed": all_ok }), !all_ok))
}

fn mode_str(mode: Mode) -> &'static str {
    match mode {
        Mode::Rational => "rational",
        Mode::Float => "float",
    }
}
