//! Command-line front end. Every command writes a deterministic `report.json`
//! (tool version, seed, resolved configuration, results) plus its data files, and
//! a `meta.json` sidecar with the wall-clock time.

mod commands;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::precision::{precision, set_precision, Precision};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pleat",
    version,
    about = "Bending maps, quasi-isometry certificates and grafting experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance overrides, e.g. `metric=1e-10,classify=1e-9,endpoint=1e-12`.
    #[arg(long)]
    pub precision: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Angle function along one geodesic segment, exported as CSV and SVG.
    Bend {
        /// Lamination JSON `{"leaves": [{"p": .., "q": .., "w": ..}]}`.
        #[arg(long)]
        input: PathBuf,
        /// Segment endpoints `x0,y0,x1,y1` in the upper half-plane.
        #[arg(long, allow_hyphen_values = true)]
        segment: String,
        #[arg(long = "ode-step", default_value_t = 1e-3)]
        ode_step: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Checks the hypotheses and samples the quasi-isometry, angle and injectivity bounds.
    Certify {
        #[arg(long)]
        input: PathBuf,
        /// Indices of the boundary leaves, comma separated.
        #[arg(long, default_value = "")]
        boundary: String,
        #[arg(long = "D")]
        d: f64,
        #[arg(long, default_value_t = crate::bending::DEFAULT_THETA0)]
        theta0: f64,
        /// Point pairs for the quasi-isometry and injectivity checks.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Random segments for the angle-function bounds.
        #[arg(long, default_value_t = 50)]
        traces: usize,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Continued-fraction approximation of a slope with decay diagnostics.
    Approx {
        /// `golden`, `silver`, `cf:a0;a1,..|p1,..` or decimal digits.
        #[arg(long, default_value = "golden")]
        alpha: String,
        #[arg(long = "i-max", default_value_t = 8)]
        i_max: usize,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Window disk `x,y,radius`.
        #[arg(long, default_value = "0,1,1")]
        window: String,
        /// Surface JSON (`generators` or `traces`); the modular torus by default.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Grafts a round annulus by an integral flat cylinder.
    Graft {
        /// Holonomy trace; |trace| > 2 is hyperbolic.
        #[arg(long, allow_hyphen_values = true)]
        trace: f64,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Samples per developed row.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Demo on the punctured torus: cuts a window along a convergent loop and
    /// certifies each piece of the proxy lamination against δ(D, θ₀).
    DecomposeDemo {
        #[arg(long, default_value = "golden")]
        alpha: String,
        #[arg(long)]
        i: usize,
        #[arg(long = "D")]
        d: f64,
        #[arg(long, default_value_t = crate::bending::DEFAULT_THETA0)]
        theta0: f64,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value = "0,1,1")]
        window: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Bend { common, .. }
            | Command::Certify { common, .. }
            | Command::Approx { common, .. }
            | Command::Graft { common, .. }
            | Command::DecomposeDemo { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Bend { .. } => "bend",
            Command::Certify { .. } => "certify",
            Command::Approx { .. } => "approx",
            Command::Graft { .. } => "graft",
            Command::DecomposeDemo { .. } => "decompose-demo",
        }
    }
}

/// Failure of a command: bad input (exit 2) or a failed check (exit 1).
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Failed(_) => EXIT_FAIL,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Result of a command before it is written out.
pub(crate) struct Outcome {
    pub passed: bool,
    /// Human-readable summary for the console.
    pub summary: String,
    /// Command-specific parameters, merged into the resolved configuration.
    pub params: Value,
    pub result: Value,
    /// Violations or failed checks; also written to the report.
    pub failures: Vec<String>,
    /// Additional files `(name, contents)`.
    pub files: Vec<(String, String)>,
}

#[derive(Serialize)]
struct RunConfig<'a> {
    command: &'a str,
    seed: u64,
    out: &'a Path,
    precision: Precision,
    params: &'a Value,
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let started = Instant::now();
    let common = cli.command.common().clone();
    let name = cli.command.name();
    if let Some(spec) = &common.precision {
        match precision().parse_overrides(spec) {
            Ok(p) => set_precision(p),
            Err(e) => {
                eprintln!("pleat {name}: {e}");
                return EXIT_INPUT;
            }
        }
    }
    let outcome = match cli.command {
        Command::Bend {
            input,
            segment,
            ode_step,
            ..
        } => commands::bend(&input, &segment, ode_step),
        Command::Certify {
            input,
            boundary,
            d,
            theta0,
            samples,
            traces,
            radius,
            common,
        } => commands::certify(&input, &boundary, d, theta0, samples, traces, radius, common.seed),
        Command::Approx {
            alpha,
            i_max,
            depth,
            window,
            input,
            ..
        } => commands::approx(&alpha, i_max, depth, &window, input.as_deref()),
        Command::Graft { trace, n, samples, .. } => commands::graft(trace, n, samples),
        Command::DecomposeDemo {
            alpha,
            i,
            d,
            theta0,
            depth,
            window,
            input,
            ..
        } => commands::decompose_demo(&alpha, i, d, theta0, depth, &window, input.as_deref()),
    };
    let (code, outcome) = match outcome {
        Ok(o) => ((if o.passed { EXIT_PASS } else { EXIT_FAIL }), o),
        Err(e) => {
            let code = e.exit_code();
            let o = Outcome {
                passed: false,
                summary: e.to_string(),
                params: Value::Null,
                result: Value::Null,
                failures: vec![e.to_string()],
                files: Vec::new(),
            };
            (code, o)
        }
    };
    if let Err(e) = write_outputs(name, &common, &outcome, code, started) {
        eprintln!("pleat {name}: cannot write outputs to {}: {e}", common.out.display());
        return EXIT_INPUT;
    }
    if code == EXIT_PASS {
        println!("{}", outcome.summary);
    } else {
        eprintln!("pleat {name}: {}", outcome.summary);
    }
    code
}

fn write_outputs(name: &str, common: &Common, outcome: &Outcome, code: i32, started: Instant) -> std::io::Result<()> {
    fs::create_dir_all(&common.out)?;
    let config = RunConfig {
        command: name,
        seed: common.seed,
        out: &common.out,
        precision: precision(),
        params: &outcome.params,
    };
    let report = json!({
        "tool": concat!("pleat ", env!("CARGO_PKG_VERSION")),
        "seed": common.seed,
        "config": config,
        "exit_code": code,
        "passed": outcome.passed,
        "failures": outcome.failures,
        "result": outcome.result,
    });
    fs::write(common.out.join("report.json"), to_pretty(&report) + "\n")?;
    for (file, contents) in &outcome.files {
        fs::write(common.out.join(file), contents)?;
    }
    let meta = json!({
        "tool": concat!("pleat ", env!("CARGO_PKG_VERSION")),
        "seed": common.seed,
        "config": config,
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
    });
    fs::write(common.out.join("meta.json"), to_pretty(&meta) + "\n")
}

fn to_pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}
