//! `owid` — correlation measures for two-qubit states from the command
//! line: closed forms, the brute-force measurement oracle, phase-flip
//! dynamics and constant-deficit level surfaces.

mod format;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use owid_core::channels::{dynamics_trajectory, find_crossing, find_sudden_death, EventOutcome};
use owid_core::closed_form::{
    concurrence_x_state, entropy_x_state, owid_bell_diagonal, owid_x_state, Boundary,
};
use owid_core::error::{Error, Result};
use owid_core::geometry::{
    export_surface, sample_level_surface, ExportFormat, FieldEvaluator, SurfaceSpec,
};
use owid_core::linalg::{ComplexMatrix4, DensityMatrix4, C64};
use owid_core::oracle::{
    concurrence_oracle, discord_oracle, min_measured_entropy_x_reduced, owid_oracle,
    OptimizerConfig,
};
use owid_core::states::{BellDiagonalParams, StateParams, XStateParams};

use format::{fmt_g, to_json_string};

#[derive(Parser)]
#[command(
    name = "owid",
    version,
    about = "Correlation measures for two-qubit states"
)]
struct Cli {
    /// Cap on worker threads for grid and oracle evaluation
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form entropy, deficit, concurrence and spectrum of a state
    Compute(ComputeArgs),
    /// Brute-force deficit, discord and concurrence, with the closed-form delta
    Oracle(OracleArgs),
    /// Deficit/concurrence trajectory under the phase-flip channel, as CSV
    Dynamics(DynamicsArgs),
    /// Entanglement sudden death and deficit/concurrence crossing
    Events(EventsArgs),
    /// Constant-deficit level surface in (c1, c2, c3) space
    Surface(SurfaceArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Bell,
    X,
}

impl Family {
    fn as_str(self) -> &'static str {
        match self {
            Family::Bell => "bell",
            Family::X => "x",
        }
    }
}

#[derive(Args)]
struct ParamArgs {
    /// State parameters as inline JSON: {"family":"bell"|"x","s":?,"c":[..]}
    #[arg(long, value_name = "JSON", conflicts_with = "params_file")]
    params: Option<String>,

    /// Read the parameter JSON from a file instead
    #[arg(long, value_name = "PATH")]
    params_file: Option<PathBuf>,

    /// Family shorthand; with it the JSON may omit the "family" key
    #[arg(long, value_enum)]
    family: Option<Family>,
}

#[derive(Args)]
struct OptimizerArgs {
    /// Coarse polar steps of the sphere search
    #[arg(long, value_name = "N")]
    coarse_polar: Option<usize>,

    /// Coarse azimuth steps of the sphere search
    #[arg(long, value_name = "N")]
    coarse_azimuth: Option<usize>,

    /// Simplex refinement iteration cap
    #[arg(long, value_name = "N")]
    refine_iterations: Option<usize>,

    /// Simplex value-spread tolerance in bits
    #[arg(long, value_name = "BITS")]
    refine_tolerance: Option<f64>,
}

impl OptimizerArgs {
    fn build(&self, defaults: &OptimizerConfig) -> Result<OptimizerConfig> {
        OptimizerConfig::new(
            self.coarse_polar.unwrap_or(defaults.coarse_polar_steps()),
            self.coarse_azimuth
                .unwrap_or(defaults.coarse_azimuth_steps()),
            self.refine_iterations
                .unwrap_or(defaults.refine_iterations()),
            self.refine_tolerance.unwrap_or(defaults.refine_tolerance()),
        )
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    optimizer: OptimizerArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    params: ParamArgs,

    /// Density matrix as inline JSON: 4x4 array of [re, im] pairs
    #[arg(long, value_name = "JSON", conflicts_with_all = ["params", "params_file", "matrix_file"])]
    matrix: Option<String>,

    /// Read the density matrix JSON from a file instead
    #[arg(long, value_name = "PATH", conflicts_with_all = ["params", "params_file"])]
    matrix_file: Option<PathBuf>,

    #[command(flatten)]
    optimizer: OptimizerArgs,
}

#[derive(Args)]
struct DynamicsArgs {
    #[command(flatten)]
    params: ParamArgs,

    /// Channel-strength grid as start:stop:step
    #[arg(long, value_name = "A:B:STEP", default_value = "0:1:0.001")]
    p_grid: String,

    /// Output CSV path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(flatten)]
    optimizer: OptimizerArgs,
}

#[derive(Args)]
struct EventsArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    optimizer: OptimizerArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvaluatorArg {
    ClosedForm,
    ReducedOracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    CsvPoints,
    ObjMesh,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Bloch component s of the measured qubit
    #[arg(long, allow_hyphen_values = true)]
    s: f64,

    /// Deficit value of the surface, in bits
    #[arg(long)]
    target: f64,

    /// Grid cells per axis
    #[arg(long, default_value_t = 96)]
    resolution: usize,

    /// Field evaluator
    #[arg(long, value_enum, default_value_t = EvaluatorArg::ReducedOracle)]
    evaluator: EvaluatorArg,

    /// Point-cloud acceptance band around the target, in bits
    #[arg(long, default_value_t = 1e-3)]
    band: f64,

    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::CsvPoints)]
    format: FormatArg,

    /// Output file path
    #[arg(long, value_name = "PATH")]
    out: PathBuf,

    #[command(flatten)]
    optimizer: OptimizerArgs,
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        let code = match err {
            Error::NonConvergence { .. } => 3,
            _ => 2,
        };
        std::process::exit(code);
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Compute(args) => cmd_compute(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Dynamics(args) => cmd_dynamics(args),
        Command::Events(args) => cmd_events(args),
        Command::Surface(args) => cmd_surface(args),
    }
}

fn load_params(args: &ParamArgs) -> Result<StateParams> {
    let text = match (&args.params, &args.params_file) {
        (Some(inline), None) => inline.clone(),
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?,
        (None, None) => {
            return Err(Error::InvalidArgument(
                "state parameters required: pass --params or --params-file".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    let mut value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("parameter JSON: {e}")))?;
    if let Some(family) = args.family {
        let object = value
            .as_object_mut()
            .ok_or_else(|| Error::InvalidArgument("parameter JSON must be an object".into()))?;
        match object.get("family") {
            None => {
                object.insert("family".into(), json!(family.as_str()));
            }
            Some(Value::String(present)) if present == family.as_str() => {}
            Some(present) => {
                return Err(Error::InvalidArgument(format!(
                    "--family {} conflicts with \"family\": {present} in the parameters",
                    family.as_str()
                )))
            }
        }
    }
    serde_json::from_value(value)
        .map_err(|e| Error::InvalidArgument(format!("parameter JSON: {e}")))
}

/// Deficit with provenance: the closed form when the (closure of the)
/// ordering condition admits it, otherwise the reduced oracle.
fn owid_with_provenance(
    params: &StateParams,
    x: &XStateParams,
    cfg: &OptimizerConfig,
) -> Result<(f64, f64, &'static str)> {
    if let StateParams::Bell { c } = params {
        let bell = BellDiagonalParams::new(c[0], c[1], c[2])?;
        let owid = owid_bell_diagonal(&bell);
        return Ok((owid.bits, owid.raw, "closed_form"));
    }
    match owid_x_state(x, Boundary::AllowEqualities) {
        Ok(owid) => Ok((owid.bits, owid.raw, "closed_form")),
        Err(Error::ClosedFormUnsupported(_)) => {
            let raw = min_measured_entropy_x_reduced(x, cfg) - entropy_x_state(x);
            Ok((raw.max(0.0), raw, "oracle"))
        }
        Err(other) => Err(other),
    }
}

fn cmd_compute(args: ComputeArgs) -> Result<()> {
    let params = load_params(&args.params)?;
    let cfg = args.optimizer.build(&OptimizerConfig::default())?;
    let x = params.to_x_params()?;
    let (bits, raw, provenance) = owid_with_provenance(&params, &x, &cfg)?;
    let condition = x.closed_form_condition();

    let report = json!({
        "family": params.family(),
        "s": x.s(),
        "c": x.c(),
        "spectrum": x.spectrum().values(),
        "entropy_bits": entropy_x_state(&x),
        "owid": {"bits": bits, "raw_bits": raw, "provenance": provenance},
        "concurrence": concurrence_x_state(&x),
        "closed_form_condition": {
            "holds": condition.holds,
            "violations": condition.violations,
        },
    });
    println!("{}", to_json_string(&report));
    Ok(())
}

fn parse_matrix(text: &str) -> Result<DensityMatrix4> {
    let raw: [[[f64; 2]; 4]; 4] = serde_json::from_str(text)
        .map_err(|e| Error::InvalidArgument(format!("matrix JSON: {e}")))?;
    let entries =
        std::array::from_fn(|i| std::array::from_fn(|j| C64::new(raw[i][j][0], raw[i][j][1])));
    DensityMatrix4::new(ComplexMatrix4::new(entries)?)
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let cfg = args.optimizer.build(&OptimizerConfig::default())?;

    let (rho, closed_bits) = if args.matrix.is_some() || args.matrix_file.is_some() {
        let text = match (&args.matrix, &args.matrix_file) {
            (Some(inline), None) => inline.clone(),
            (None, Some(path)) => std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?,
            _ => unreachable!("clap rejects the combination"),
        };
        (parse_matrix(&text)?, None)
    } else {
        let params = load_params(&args.params)?;
        let x = params.to_x_params()?;
        let closed = match &params {
            StateParams::Bell { c } => {
                Some(owid_bell_diagonal(&BellDiagonalParams::new(c[0], c[1], c[2])?).bits)
            }
            StateParams::X { .. } => owid_x_state(&x, Boundary::AllowEqualities)
                .ok()
                .map(|v| v.bits),
        };
        (x.density(), closed)
    };

    let result = owid_oracle(&rho, &cfg)?;
    let discord = discord_oracle(&rho, &cfg)?;
    let report = json!({
        "owid_bits": result.deficit.bits,
        "argmin": result.argmin.components(),
        "min_measured_entropy_bits": result.min_measured_entropy,
        "discord_bits": discord,
        "concurrence": concurrence_oracle(&rho),
        "closed_form_owid_bits": closed_bits,
        "closed_form_delta": closed_bits.map(|c| result.deficit.bits - c),
    });
    println!("{}", to_json_string(&report));
    Ok(())
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(Error::InvalidArgument(format!(
            "--p-grid must be start:stop:step, got {spec:?}"
        )));
    };
    let parse = |name: &str, v: &str| -> Result<f64> {
        v.parse()
            .map_err(|_| Error::InvalidArgument(format!("--p-grid {name} is not a number: {v:?}")))
    };
    let start = parse("start", start)?;
    let stop = parse("stop", stop)?;
    let step = parse("step", step)?;
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) || start > stop {
        return Err(Error::InvalidArgument(format!(
            "--p-grid range must satisfy 0 <= start <= stop <= 1, got {start}..{stop}"
        )));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "--p-grid step must be positive, got {step}"
        )));
    }
    let count = ((stop - start) / step).round() as usize;
    Ok((0..=count)
        .map(|k| (start + k as f64 * step).min(stop))
        .collect())
}

fn cmd_dynamics(args: DynamicsArgs) -> Result<()> {
    let params = load_params(&args.params)?.to_x_params()?;
    let cfg = args.optimizer.build(&OptimizerConfig::default())?;
    let grid = parse_grid(&args.p_grid)?;
    let points = dynamics_trajectory(&params, &grid, &cfg)?;

    let mut text = String::from("p,owid_bits,concurrence\n");
    for point in &points {
        let _ = writeln!(
            text,
            "{},{},{}",
            fmt_g(point.p),
            fmt_g(point.owid_bits),
            fmt_g(point.concurrence)
        );
    }
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?,
        None => print!("{text}"),
    }
    Ok(())
}

fn event_json(outcome: &EventOutcome) -> Value {
    match outcome {
        EventOutcome::Found(report) => json!({
            "found": true,
            "p": report.p_star,
            "residual": report.residual,
        }),
        EventOutcome::NoEvent { reason } => json!({
            "found": false,
            "reason": reason,
        }),
    }
}

fn cmd_events(args: EventsArgs) -> Result<()> {
    let params = load_params(&args.params)?.to_x_params()?;
    let cfg = args.optimizer.build(&OptimizerConfig::default())?;
    let report = json!({
        "sudden_death": event_json(&find_sudden_death(&params)),
        "crossing": event_json(&find_crossing(&params, &cfg)),
    });
    println!("{}", to_json_string(&report));
    Ok(())
}

fn cmd_surface(args: SurfaceArgs) -> Result<()> {
    let mut spec = SurfaceSpec::new(args.s, args.target)?
        .with_resolution(args.resolution)?
        .with_band(args.band)?
        .with_evaluator(match args.evaluator {
            EvaluatorArg::ClosedForm => FieldEvaluator::ClosedForm,
            EvaluatorArg::ReducedOracle => FieldEvaluator::ReducedOracle,
        });
    let field_defaults = spec.optimizer.clone();
    spec = spec.with_optimizer(args.optimizer.build(&field_defaults)?);

    let sample = sample_level_surface(&spec)?;
    println!(
        "grid: {} points, {} defined",
        sample.grid_points_total, sample.grid_points_defined
    );
    println!("band points: {}", sample.points.len());
    println!(
        "mesh: {} vertices, {} triangles",
        sample.vertices.len(),
        sample.triangles.len()
    );
    if let Some(diagnostic) = &sample.diagnostic {
        eprintln!("warning: {diagnostic}");
    }

    match args.format {
        FormatArg::CsvPoints => {
            export_surface(&sample, ExportFormat::CsvPoints, &args.out)?;
            println!("wrote {}", args.out.display());
        }
        FormatArg::ObjMesh => {
            if sample.triangles.is_empty() {
                eprintln!("warning: no mesh to write, skipping {}", args.out.display());
            } else {
                export_surface(&sample, ExportFormat::ObjMesh, &args.out)?;
                println!("wrote {}", args.out.display());
            }
        }
    }
    Ok(())
}
