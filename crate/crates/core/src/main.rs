use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ras_isac::antenna::RadiationPattern;
use ras_isac::channel::free_space_amplitude;
use ras_isac::scenario::{
    emit_results, optimize_scenario, run_azimuth_sweep, run_power_sweep, OutputFormat, PlacedScenario, RunMetadata,
    ScenarioConfig, SweepOutput,
};
use ras_isac::signal::{linear_to_db, ReceiveFilter, Scheme};
use ras_isac::{exec, Error, Execution, Result};

#[derive(Parser)]
#[command(name = "ras-isac", version, about = "Rotatable-antenna ISAC simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Received power versus user azimuth.
    SweepAzimuth(RunArgs),
    /// SCNR versus transmit power over Monte-Carlo placements.
    SweepPower(RunArgs),
    /// Optimize boresights for run 0 of the scenario and print the result.
    Optimize(RunArgs),
    /// Run the built-in numerical self-checks.
    OracleCheck,
    /// Parse and validate a configuration, then print it fully resolved.
    ValidateConfig {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Ras,
    Fixed,
    Ma,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    Matched,
    Mvdr,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long, value_enum)]
    receive_filter: Option<FilterArg>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    threads: Option<usize>,
}

fn load_config(path: Option<&Path>) -> Result<ScenarioConfig> {
    match path {
        Some(p) => ScenarioConfig::load(p),
        None => Ok(ScenarioConfig::default()),
    }
}

impl RunArgs {
    fn config(&self) -> Result<ScenarioConfig> {
        let mut c = load_config(self.config.as_deref())?;
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(s) = self.scheme {
            c.schemes = match s {
                SchemeArg::Ras => vec![Scheme::Ras],
                SchemeArg::Fixed => vec![Scheme::Fixed],
                SchemeArg::Ma => vec![Scheme::Ma],
                SchemeArg::All => Scheme::ALL.to_vec(),
            };
        }
        if let Some(r) = self.runs {
            c.monte_carlo_runs = r;
        }
        if let Some(f) = self.receive_filter {
            c.receive_filter = match f {
                FilterArg::Matched => ReceiveFilter::Matched,
                FilterArg::Mvdr => ReceiveFilter::Mvdr,
            };
        }
        c.resolved()
    }

    fn format(&self) -> OutputFormat {
        match self.format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }

    fn execution(&self) -> Execution {
        match self.threads {
            Some(1) => Execution::Sequential,
            _ => Execution::default(),
        }
    }

    fn run<T: Send>(&self, f: impl FnOnce(Execution) -> T + Send) -> T {
        let exec = self.execution();
        match self.threads {
            Some(t) if t > 1 => exec::with_threads(t, || f(exec)),
            _ => f(exec),
        }
    }
}

fn write_sweep(args: &RunArgs, config: &ScenarioConfig, out: SweepOutput) -> Result<()> {
    let meta = RunMetadata::new(config, out.spec, out.placements);
    match &args.out {
        Some(path) => emit_results(&out.rows, args.format(), path, &meta),
        None => {
            if out.rows.is_empty() {
                return Err(Error::Precondition("no result rows to write".into()));
            }
            let mut rows = out.rows;
            ras_isac::scenario::output::sort_rows(&mut rows);
            let text = match args.format() {
                OutputFormat::Csv => ras_isac::scenario::output::to_csv(&rows),
                OutputFormat::Json => ras_isac::scenario::output::to_json(&rows, &meta)? + "\n",
            };
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct OptimizeReport<'a> {
    config: &'a ScenarioConfig,
    placement: PlacedScenario,
    objective_linear: f64,
    objective_db: f64,
    evaluations: u64,
    orientations: Vec<[f64; 2]>,
    trace: Vec<f64>,
}

fn optimize(args: &RunArgs) -> Result<()> {
    let config = args.config()?;
    let (placement, r) = args.run(|e| optimize_scenario(&config, e))?;
    let report = OptimizeReport {
        config: &config,
        placement,
        objective_linear: r.objective,
        objective_db: linear_to_db(r.objective),
        evaluations: r.evaluations,
        orientations: r.orientations.iter().map(|o| [o.zenith(), o.azimuth()]).collect(),
        trace: r.trace,
    };
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Quick self-checks of the pattern normalization and the free-space spot value.
fn oracle_check() -> Result<bool> {
    let pattern = RadiationPattern::default();
    let nt = 2000usize;
    let dt = std::f64::consts::PI / nt as f64;
    let mut integral = 0.0;
    for i in 0..nt {
        let t = (i as f64 + 0.5) * dt;
        integral += pattern.effective_gain(t)? * t.sin() * dt * std::f64::consts::TAU;
    }
    let ratio = integral / (4.0 * std::f64::consts::PI);
    let pattern_ok = (ratio - 1.0).abs() < 0.005;
    println!(
        "{} pattern integral over the sphere = {:.6} x 4pi",
        if pattern_ok { "PASS" } else { "FAIL" },
        ratio
    );
    let loss_db = linear_to_db(free_space_amplitude(100.0, 0.125)?.powi(2));
    let loss_ok = (loss_db + 80.05).abs() < 0.01;
    println!(
        "{} free-space power at 100 m, lambda 0.125 m = {loss_db:.4} dB",
        if loss_ok { "PASS" } else { "FAIL" }
    );
    Ok(pattern_ok && loss_ok)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::SweepAzimuth(args) => {
            let config = args.config()?;
            let out = args.run(|e| run_azimuth_sweep(&config, e))?;
            write_sweep(&args, &config, out)?;
        }
        Command::SweepPower(args) => {
            let config = args.config()?;
            let out = args.run(|e| run_power_sweep(&config, e))?;
            write_sweep(&args, &config, out)?;
        }
        Command::Optimize(args) => optimize(&args)?,
        Command::OracleCheck => {
            if !oracle_check()? {
                return Ok(ExitCode::from(1));
            }
        }
        Command::ValidateConfig { config } => {
            let c = load_config(config.as_deref())?.resolved()?;
            println!("{}", serde_json::to_string_pretty(&c)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
