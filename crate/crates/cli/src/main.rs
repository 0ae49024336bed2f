//! `nisq`: batch front end for circuit analysis, readout calibration,
//! mitigation and the simulated experiments.
//!
//! Exit status is 0 on success, 1 on a usage error and 2 when an input file
//! is missing, malformed or numerically unusable.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nisq_core::experiments::{format_real, run_experiment, ExperimentConfig, DEFAULT_SEED};
use nisq_core::expressivity::{
    classify_with, inductive_ansatz, random_point, remove_redundant, ClassifyOptions, ExpressivityReport, Mode,
};
use nisq_core::mitigation::{
    calibrate_run, mitigate_with_record, mitigated_expectation, CalibrationRecord, ReadoutNoiseModel,
    SimulatedExecutor,
};
use nisq_core::{ParametricCircuit, PauliSum, ShotCounts};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: nisq_core::Error },
    #[error(transparent)]
    Core(#[from] nisq_core::Error),
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "nisq", version, about = "Expressivity analysis and readout-error mitigation for parametric circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify circuit parameters and write an expressivity report.
    Analyze(AnalyzeArgs),
    /// Freeze redundant parameters and write the reduced circuit.
    Prune(AnalyzeArgs),
    /// Write the inductive maximally expressive candidate circuit.
    Ansatz {
        #[arg(long)]
        qubits: usize,
        /// Leave out the global-phase parameter.
        #[arg(long)]
        no_phase: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate flip probabilities on the simulated device.
    Calibrate {
        /// True noise model of the simulated device; noiseless if omitted.
        #[arg(long)]
        noise: Option<PathBuf>,
        /// Defaults to the size of the noise model.
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long, default_value_t = 4096)]
        shots: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        run_index: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Run an experiment described by a JSON config and write CSV.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the readout-mitigated expectation of a diagonal observable.
    Mitigate {
        #[arg(long)]
        counts: PathBuf,
        #[arg(long)]
        observable: PathBuf,
        /// Noise model or calibration record.
        #[arg(long)]
        noise: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// Evaluation point; a seeded random point if omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    point: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Defaults to 1e-8 (exact) or 5/(4 sqrt(shots)) (sampled).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Shots per Gram entry in sampled mode.
    #[arg(long, default_value_t = 8000)]
    shots: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    no_timestamp: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, CliError::Usage(_)) { 1 } else { 2 })
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Analyze(args) => {
            let (_, report) = analyze(&args)?;
            emit(args.out.as_deref(), &to_json(&report))
        }
        Command::Prune(args) => {
            let (circuit, report) = analyze(&args)?;
            let reduced = remove_redundant(&circuit, &report, &BTreeMap::new())?;
            emit(args.out.as_deref(), &format!("{}\n", reduced.to_json_string()))
        }
        Command::Ansatz { qubits, no_phase, out } => {
            let c = inductive_ansatz(qubits, !no_phase)?;
            emit(out.as_deref(), &format!("{}\n", c.to_json_string()))
        }
        Command::Calibrate { noise, qubits, shots, seed, run_index, out, no_timestamp } => {
            let truth = noise.as_deref().map(|p| load(p, ReadoutNoiseModel::from_json_str)).transpose()?;
            let qubits = match (qubits, &truth) {
                (Some(q), _) => q,
                (None, Some(m)) => m.num_qubits(),
                (None, None) => return Err(CliError::Usage("calibrate needs --qubits or --noise".into())),
            };
            let executor = SimulatedExecutor { noise: truth };
            let mut record = calibrate_run(&executor, qubits, shots, seed, run_index)?;
            record.timestamp = timestamp(no_timestamp);
            emit(out.as_deref(), &to_json(&record))
        }
        Command::Experiment { config, seed, out } => {
            let mut cfg = load(&config, ExperimentConfig::from_json_str)?;
            if seed.is_some() {
                cfg.seed = seed;
            }
            let csv = run_experiment(&cfg)?.to_csv();
            let target = out.or_else(|| cfg.output.as_ref().map(PathBuf::from));
            emit(target.as_deref(), &csv)
        }
        Command::Mitigate { counts, observable, noise } => {
            let counts = load(&counts, ShotCounts::from_json_str)?;
            let observable = load(&observable, PauliSum::from_json_str)?;
            let text = read(&noise)?;
            match CalibrationRecord::from_json_str(&text) {
                Ok(record) => {
                    let est = mitigate_with_record(&counts, &observable, &record)?;
                    println!("{}", format_real(est.value));
                    println!("calibration_stderr {}", format_real(est.calibration_stderr));
                }
                Err(_) => {
                    let model = ReadoutNoiseModel::from_json_str(&text)
                        .map_err(|source| CliError::Parse { path: noise.clone(), source })?;
                    println!("{}", format_real(mitigated_expectation(&counts, &observable, &model)?));
                }
            }
            Ok(())
        }
    }
}

fn analyze(args: &AnalyzeArgs) -> Result<(ParametricCircuit, ExpressivityReport)> {
    let circuit = load(&args.circuit, ParametricCircuit::from_json_str)?;
    let point = match &args.point {
        Some(p) => p.clone(),
        None => random_point(circuit.num_params(), args.seed),
    };
    let mode = match args.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Sampled => Mode::Sampled { shots: args.shots, seed: args.seed },
    };
    let mut options = ClassifyOptions::new(mode);
    if let Some(e) = args.epsilon {
        options.epsilon = e;
    }
    let mut report = classify_with(&circuit, &point, &options)?;
    report.timestamp = timestamp(args.no_timestamp);
    Ok((circuit, report))
}

fn timestamp(suppress: bool) -> Option<u64> {
    if suppress {
        return None;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> nisq_core::Result<T>) -> Result<T> {
    parse(&read(path)?).map_err(|source| CliError::Parse { path: path.to_owned(), source })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.to_owned(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}
