use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qdfs::report::{run_axioms, run_evolve, run_invariants, run_sweep, AxiomsOptions, Outcome, RunConfig, Status};

#[derive(Parser)]
#[command(
    name = "qdfs",
    version,
    about = "Quantum-group noiseless codes: Hopf checks, invariant subspaces, dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact symbolic check of the Hopf axioms and unitarity of u.
    Axioms {
        #[arg(long, default_value_t = 3)]
        max_word_len: usize,
        /// Write the JSON report here as well as to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_faulty_antipode: bool,
    },
    /// Joint kernel of K3, K+, K- and its multiplicity.
    Invariants {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Register + bath evolution and the theorem checks.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Multiplicity table over a grid of μ and n.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(Status::UsageOrConfig.code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<Status, String> {
    let (outcome, json_path, csv_path) = match cli.command {
        Command::Axioms {
            max_word_len,
            output,
            inject_faulty_antipode,
        } => {
            let opts = AxiomsOptions {
                max_word_len,
                faulty_antipode: inject_faulty_antipode,
            };
            (run_axioms(&opts), output, None)
        }
        Command::Invariants { config, output } => {
            let cfg = load(&config)?;
            let json = output.or(cfg.output.as_ref().and_then(|o| o.json.clone()));
            (run_invariants(&cfg).map_err(|e| e.to_string())?, json, None)
        }
        Command::Evolve { config, csv, output } => {
            let cfg = load(&config)?;
            let json = output.or(cfg.output.as_ref().and_then(|o| o.json.clone()));
            let csv = csv.or(cfg.output.as_ref().and_then(|o| o.csv.clone()));
            (run_evolve(&cfg).map_err(|e| e.to_string())?, json, csv)
        }
        Command::Sweep { config, output } => {
            let cfg = load(&config)?;
            let json = output.or(cfg.output.as_ref().and_then(|o| o.json.clone()));
            (run_sweep(&cfg).map_err(|e| e.to_string())?, json, None)
        }
    };
    emit(&outcome, json_path, csv_path)?;
    Ok(outcome.status)
}

fn load(path: &Path) -> Result<RunConfig, String> {
    RunConfig::from_path(path).map_err(|e| e.to_string())
}

fn emit(outcome: &Outcome, json: Option<PathBuf>, csv: Option<PathBuf>) -> Result<(), String> {
    print!("{}", outcome.report.to_json_string());
    outcome
        .write_outputs(json.as_deref(), csv.as_deref())
        .map_err(|e| format!("cannot write output: {e}"))?;
    for w in &outcome.report.warnings {
        eprintln!("warning: {}", w.message);
    }
    eprintln!("{}", outcome.summary);
    Ok(())
}
