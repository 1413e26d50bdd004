use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use relaybeam::harness::{emit_csv, run_sweep_with_workers, ExperimentSpec};
use relaybeam::model::secrecy_rate;
use relaybeam::validation::{run_suite, Suite, ValidationConfig};
use relaybeam::{solve, BeamSolution, Scalar, Scenario, Tolerances};

#[derive(Parser)]
#[command(name = "relaybeam", version, about = "Artificial-noise beamforming through untrusted relays")]
struct Cli {
    /// Tolerance profile: default, strict, relaxed, loose or single.
    #[arg(long, global = true, env = "RELAYBEAM_TOLERANCE", default_value = "default")]
    tolerance: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario (instance plus parameters) from a JSON file.
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// Print the full solution as JSON.
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value_t = Precision::F64)]
        precision: Precision,
    },
    /// Run a Monte Carlo sweep and write the averaged rows as CSV.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; 0 uses every available core.
        #[arg(long, env = "RELAYBEAM_WORKERS", default_value_t = 0)]
        workers: usize,
    },
    /// Cross-check the solvers against the brute-force oracles.
    Validate {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Precision {
    F32,
    F64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Total,
    Individual,
    Signals,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Total => Suite::Total,
            SuiteArg::Individual => Suite::Individual,
            SuiteArg::Signals => Suite::Signals,
        }
    }
}

fn print_solution<T: Scalar>(scenario: &Scenario<T>, sol: &BeamSolution<T>) {
    println!("budget: {}", scenario.params.budget.kind());
    println!("alpha: {}", sol.alpha);
    println!("c_d: {}", sol.c_d);
    if scenario.instance.relays() > 0 {
        if let Ok(s) = secrecy_rate(&scenario.instance, scenario.params.p1, sol.alpha, &sol.w) {
            println!("secrecy_rate: {s}");
        }
    }
    println!("second_phase_power: {}", sol.second_phase_power);
    println!("source_power: {}", sol.source_power);
    for (i, p) in sol.relay_powers.iter().enumerate() {
        println!("relay_power[{i}]: {p}");
    }
    for (i, w) in sol.w.iter().enumerate() {
        println!("w[{i}]: {} {:+}j", w.re, w.im);
    }
}

fn run_solve<T: Scalar>(text: &str, json: bool, tol: &Tolerances) -> Result<()> {
    let scenario = Scenario::<T>::from_json(text)?;
    let sol = solve(&scenario, tol)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&sol)?);
    } else {
        print_solution(&scenario, &sol);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let Some(tol) = Tolerances::by_name(&cli.tolerance) else {
        bail!("unknown tolerance profile `{}`", cli.tolerance);
    };
    match cli.command {
        Command::Solve { input, json, precision } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            match precision {
                Precision::F64 => run_solve::<f64>(&text, json, &tol)?,
                Precision::F32 => run_solve::<f32>(&text, json, &tol)?,
            }
        }
        Command::Sweep { spec, out, workers } => {
            let text = fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let spec: ExperimentSpec = serde_json::from_str(&text).context("parsing sweep spec")?;
            let workers = if workers == 0 { std::thread::available_parallelism().map_or(1, |n| n.get()) } else { workers };
            let output = run_sweep_with_workers::<f64>(&spec, &tol, workers)?;
            emit_csv(&output.rows, &out).with_context(|| format!("writing {}", out.display()))?;
            log::info!("wrote {} rows to {} ({} resampled draws)", output.rows.len(), out.display(), output.resampled);
        }
        Command::Validate { suite, seed, cases } => {
            let cfg = ValidationConfig { seed, cases, tolerances: tol };
            let report = run_suite(suite.into(), &cfg)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if !report.passed() {
                eprintln!("{} check(s) failed", report.failures.len());
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
