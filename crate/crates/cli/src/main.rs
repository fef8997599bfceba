//! `riscap`: secrecy-capacity sweeps, figure data, and self-validation for
//! RIS-aided vehicular links.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use riscap_core::capacity::QuadratureSpec;
use riscap_core::channel::{Model, SystemParams};
use riscap_core::output::{rows_to_csv, rows_to_json};
use riscap_core::sweep::{
    figure_preset, run_figure, run_sweep, Figure, Row, SweepSpec, Varied, DEFAULT_FIGURE_CELLS,
};
use riscap_core::{Error, Execution};

mod config;
mod validate;

use config::FileConfig;

/// How a run ended, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// bad flags, config file, or parameters (exit 2)
    Config(String),
    /// a quadrature or contour integral missed its accuracy target (exit 3)
    Numerical(String),
    /// `validate` found violated invariants (exit 1)
    Violations(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Convergence { .. } => Failure::Numerical(e.to_string()),
            Error::Domain { .. } | Error::Config(_) => Failure::Config(e.to_string()),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Violations(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "riscap", version, about = "Average secrecy capacity of RIS-aided vehicular links")]
struct Cli {
    /// Flat key/value TOML file supplying defaults for any flag
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep one parameter and write analytic (and optionally Monte Carlo) secrecy
    Sweep(SweepArgs),
    /// Run one of the built-in figure presets
    Figure(FigureArgs),
    /// Check the analytic results against their oracles and Monte Carlo
    Validate(ValidateArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModelArg {
    Ap,
    Relay,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Ap => Model::AccessPoint,
            ModelArg::Relay => Model::Relay,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VaryArg {
    Ps,
    Re,
    Rs,
    N,
}

impl From<VaryArg> for Varied {
    fn from(v: VaryArg) -> Self {
        match v {
            VaryArg::Ps => Varied::Ps,
            VaryArg::Re => Varied::Re,
            VaryArg::Rs => Varied::Rs,
            VaryArg::N => Varied::N,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FigureArg {
    Fig4,
    Fig5,
    Fig6,
}

impl From<FigureArg> for Figure {
    fn from(f: FigureArg) -> Self {
        match f {
            FigureArg::Fig4 => Figure::Fig4,
            FigureArg::Fig5 => Figure::Fig5,
            FigureArg::Fig6 => Figure::Fig6,
        }
    }
}

#[derive(Args, Debug)]
struct McArgs {
    /// Monte Carlo samples per grid point (at least 10000)
    #[arg(long)]
    mc_samples: Option<u64>,
    /// Monte Carlo base seed
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// CSV destination
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also write a JSON mirror of the CSV
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, value_enum)]
    vary: Option<VaryArg>,
    /// Comma-separated, strictly increasing values of the varied parameter
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Source power Ps in watts
    #[arg(long)]
    ps: Option<f64>,
    /// Noise power N0 in watts
    #[arg(long)]
    noise: Option<f64>,
    /// Path-loss exponent
    #[arg(long)]
    beta: Option<f64>,
    /// RIS to destination distance in meters
    #[arg(long)]
    rd: Option<f64>,
    /// RIS to eavesdropper distance in meters
    #[arg(long)]
    re: Option<f64>,
    /// Source to RIS distance in meters (relay only)
    #[arg(long)]
    rs: Option<f64>,
    /// Number of RIS cells
    #[arg(long)]
    cells: Option<u32>,
    /// Quadrature nodes per piece
    #[arg(long)]
    nodes: Option<usize>,
    #[command(flatten)]
    mc: McArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FigureArgs {
    #[arg(value_enum)]
    figure: FigureArg,
    /// Base cell count N0; series use N0 and 2·N0
    #[arg(long)]
    n_cells: Option<u32>,
    /// Noise power N0 in watts
    #[arg(long)]
    noise: Option<f64>,
    #[command(flatten)]
    mc: McArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    mc: McArgs,
}

/// Flag value, else config value.
fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

fn enum_from_file<E: ValueEnum>(file: &FileConfig, key: &str) -> Result<Option<E>, Failure> {
    match file.string(key)? {
        None => Ok(None),
        Some(s) => E::from_str(&s, true)
            .map(Some)
            .map_err(|_| Failure::Config(format!("config key {key:?}: invalid value {s:?}"))),
    }
}

fn mc_settings(args: &McArgs, file: &FileConfig) -> Result<Option<(u64, u64)>, Failure> {
    let samples = pick(args.mc_samples, file.u64("mc-samples")?);
    let seed = pick(args.seed, file.u64("seed")?).unwrap_or(0);
    Ok(samples.map(|k| (k, seed)))
}

fn output_paths(args: &OutputArgs, file: &FileConfig) -> Result<(PathBuf, Option<PathBuf>), Failure> {
    let out = pick(args.out.clone(), file.string("out")?.map(PathBuf::from))
        .ok_or_else(|| Failure::Config("--out is required".into()))?;
    let json = pick(args.json.clone(), file.string("json")?.map(PathBuf::from));
    Ok((out, json))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}

fn write_rows(rows: &[Row], out: &Path, json: Option<&Path>) -> Result<(), Failure> {
    write_file(out, &rows_to_csv(rows)?)?;
    if let Some(j) = json {
        write_file(j, &rows_to_json(rows)?)?;
    }
    eprintln!("wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}

fn sweep(args: &SweepArgs, file: &FileConfig, exec: Execution) -> Result<(), Failure> {
    let model: Model = pick(args.model, enum_from_file::<ModelArg>(file, "model")?)
        .ok_or_else(|| Failure::Config("--model is required".into()))?
        .into();
    let vary: Varied = pick(args.vary, enum_from_file::<VaryArg>(file, "vary")?)
        .ok_or_else(|| Failure::Config("--vary is required".into()))?
        .into();
    let grid = match &args.grid {
        Some(s) => config::parse_grid(s)?,
        None => file
            .grid("grid")?
            .ok_or_else(|| Failure::Config("--grid is required".into()))?,
    };
    let (out, json) = output_paths(&args.output, file)?;

    let mut base = SystemParams::defaults(model);
    let set = |slot: &mut f64, flag: Option<f64>, key: &str| -> Result<(), Failure> {
        if let Some(v) = pick(flag, file.f64(key)?) {
            *slot = v;
        }
        Ok(())
    };
    set(&mut base.source_power, args.ps, "ps")?;
    set(&mut base.noise_psd, args.noise, "noise")?;
    set(&mut base.pathloss_exponent, args.beta, "beta")?;
    set(&mut base.r_d, args.rd, "rd")?;
    set(&mut base.r_e, args.re, "re")?;
    set(&mut base.r_s, args.rs, "rs")?;
    if let Some(n) = pick(args.cells.map(u64::from), file.u64("cells")?) {
        base.cell_count = u32::try_from(n).map_err(|_| Failure::Config(format!("cells = {n} is too large")))?;
    }

    let mut spec = SweepSpec::new(base, vary, grid);
    if let Some(n) = pick(args.nodes.map(|n| n as u64), file.u64("nodes")?) {
        spec.quadrature = QuadratureSpec {
            node_count: n as usize,
            ..QuadratureSpec::default()
        };
    }
    if let Some((samples, seed)) = mc_settings(&args.mc, file)? {
        spec = spec.with_mc(samples, seed);
    }
    let records = run_sweep(&spec, exec)?;
    let rows: Vec<Row> = records
        .into_iter()
        .map(|record| Row { series: None, record })
        .collect();
    write_rows(&rows, &out, json.as_deref())
}

fn figure(args: &FigureArgs, file: &FileConfig, exec: Execution) -> Result<(), Failure> {
    let n0 = match pick(args.n_cells.map(u64::from), file.u64("n-cells")?) {
        Some(n) => u32::try_from(n).map_err(|_| Failure::Config(format!("n-cells = {n} is too large")))?,
        None => DEFAULT_FIGURE_CELLS,
    };
    let (out, json) = output_paths(&args.output, file)?;
    let mut preset = figure_preset(args.figure.into(), n0)?;
    if let Some(noise) = pick(args.noise, file.f64("noise")?) {
        for s in &mut preset.series {
            s.spec.base.noise_psd = noise;
        }
    }
    if let Some((samples, seed)) = mc_settings(&args.mc, file)? {
        preset = preset.with_mc(samples, seed);
    }
    let rows = run_figure(&preset, exec)?;
    write_rows(&rows, &out, json.as_deref())
}

fn configure_threads(threads: Option<usize>) -> Result<Execution, Failure> {
    match threads {
        Some(0) => Err(Failure::Config("--threads must be at least 1".into())),
        Some(1) => Ok(Execution::Sequential),
        Some(n) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Config(format!("cannot start {n} threads: {e}")))?;
            #[cfg(not(feature = "parallel"))]
            eprintln!("built without parallel support; ignoring --threads {n}");
            Ok(Execution::Parallel)
        }
        None => Ok(Execution::Parallel),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let threads = pick(cli.threads.map(|t| t as u64), file.u64("threads")?).map(|t| t as usize);
    let exec = configure_threads(threads)?;
    match &cli.command {
        Command::Sweep(args) => sweep(args, &file, exec),
        Command::Figure(args) => figure(args, &file, exec),
        Command::Validate(args) => {
            let (samples, seed) = mc_settings(&args.mc, &file)?.unwrap_or((validate::DEFAULT_SAMPLES, 0));
            let failed = validate::run(samples, seed, exec)?;
            if failed == 0 {
                Ok(())
            } else {
                Err(Failure::Violations(failed))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(msg) => eprintln!("error: {msg}"),
                Failure::Numerical(msg) => eprintln!("numerical error: {msg}"),
                Failure::Violations(n) => eprintln!("{n} check(s) failed"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
