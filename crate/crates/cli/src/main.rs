use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use permqr::{AlgorithmKind, MatrixClass};
use permqr_cli::commands;

#[derive(Parser)]
#[command(
    name = "permqr",
    version,
    about = "QR iteration with permutations: single runs and ensemble experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate one matrix and write k, E_k^2 and the off-diagonal norm as CSV.
    Run {
        #[arg(long)]
        matrix: PathBuf,
        /// qr, qrh, qrs, do, co, bic (also chol, id)
        #[arg(long, value_parser = parse_alg)]
        alg: AlgorithmKind,
        #[arg(long, default_value_t = 50)]
        iters: usize,
        /// Provenance tag recorded in the output.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an ensemble experiment described by a key=value config file.
    Ensemble {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one random matrix in the plain-text matrix format.
    Gen {
        /// sym, pd (or diag)
        #[arg(long, value_parser = parse_class)]
        class: MatrixClass,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = permqr::ensemble::DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_alg(s: &str) -> Result<AlgorithmKind, String> {
    s.parse().map_err(|e: permqr::Error| e.to_string())
}

fn parse_class(s: &str) -> Result<MatrixClass, String> {
    s.parse().map_err(|e: permqr::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run {
            matrix,
            alg,
            iters,
            seed,
            out,
        } => commands::run(&matrix, alg, iters, seed, out.as_deref()),
        Command::Ensemble { config, out } => commands::ensemble(&config, out.as_deref()),
        Command::Gen {
            class,
            order,
            seed,
            threshold,
            out,
        } => commands::gen(class, order, seed, threshold, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("permqr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
