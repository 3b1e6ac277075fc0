//! Command line driver: runs the configured construction pipeline stage
//! by stage and writes deterministic JSON artifacts.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use symwave::io::ProjectConfig;
use symwave::pipeline::{chain_for, execute, PipelineState};
use symwave::scalar::Backend;
use symwave::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Parser)]
#[command(name = "symwave", about = "Symmetric wavelet frame constructions", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Project configuration file (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Arithmetic backend for the loaded masks.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Exact)]
    backend: BackendArg,
    /// Artifact output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for the sampled verification checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Digit sets of the dilation matrix.
    Digits,
    /// Orbit decomposition under the symmetry group.
    Orbits,
    /// Dual refinable mask (load or solve).
    Dual,
    /// Frame-like wavelet extension.
    Framelike,
    /// Lifting on top of the frame-like bank.
    Lift,
    /// Direct dual frame construction.
    Frame,
    /// Rerun the configured pipeline with orbit symmetrization.
    Symmetrize,
    /// Run the configured pipeline and verify the result.
    Verify,
    /// Full pipeline: construct, verify, write all artifacts.
    Run,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Digits => "digits",
            Command::Orbits => "orbits",
            Command::Dual => "dual",
            Command::Framelike => "framelike",
            Command::Lift => "lift",
            Command::Frame => "frame",
            Command::Symmetrize => "symmetrize",
            Command::Verify => "verify",
            Command::Run => "run",
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::Parse(_)
        | Error::DuplicateExponent(_)
        | Error::GridAmbiguous
        | Error::Io(_)
        | Error::Json(_)
        | Error::SingularMatrix
        | Error::NotExpanding(_)
        | Error::BadOverride(_)
        | Error::NotClosed(_, _)
        | Error::NotUnimodular(_)
        | Error::NotAppropriate(_)
        | Error::BadCenter(_)
        | Error::ClosureCapExceeded(_)
        | Error::DigitIncompatible(_) => 4,
        Error::Unsolvable { .. }
        | Error::SymmetryUnattainable(_)
        | Error::NotInterpolatoryAtDigit
        | Error::JetConditionFailed(_)
        | Error::StepPreconditionFailed { .. }
        | Error::PreconditionFailed(_)
        | Error::NotAbelian => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<(), (u8, String)> {
    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| (4u8, "missing --config FILE".to_string()))?;
    let mut config =
        ProjectConfig::load(config_path).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    if matches!(cli.command, Command::Symmetrize) {
        config.symmetrize = true;
    }
    let backend = match cli.backend {
        BackendArg::Exact => Backend::Exact,
        BackendArg::Float => Backend::Float,
    };
    let base_dir = config_path
        .parent()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    let chain =
        chain_for(cli.command.name(), &config).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let mut st = PipelineState::new(config, base_dir, backend, cli.seed);
    execute(&chain, &mut st).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    std::fs::create_dir_all(&cli.out).map_err(|e| (4u8, e.to_string()))?;
    for (name, text) in &st.artifacts {
        std::fs::write(cli.out.join(name), text).map_err(|e| (4u8, e.to_string()))?;
    }
    if let Some(report) = &st.report {
        for check in &report.checks {
            println!("{:<40} {}", check.name, check.verdict);
        }
        if !report.all_passed() {
            return Err((2, "verification checks failed; see report.json".to_string()));
        }
    }
    println!("wrote {} artifacts to {}", st.artifacts.len(), cli.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
