//! `millergood`: double-well ground states by the Miller-Good rule, the
//! exact eigensolver used to check them, and validity diagnostics.
//!
//! Exit status: 0 on success, 1 when a numerical check or tolerance fails,
//! 2 for domain and usage errors.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::BackendChoice;
use output::{Format, Report};

#[derive(Debug, Parser)]
#[command(name = "millergood", version, about = "Semiclassical and exact ground states of the quartic double well")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Convergence tolerance of the exact solver.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,

    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recompute the published ground-state table.
    Table,
    /// E/U_min over a coupling sweep.
    Figure {
        #[arg(long, default_value_t = 0.01)]
        from: f64,
        #[arg(long, default_value_t = 0.1)]
        to: f64,
        #[arg(long, default_value_t = 0.005)]
        step: f64,
    },
    /// Solve the reduced quantization equation for one coupling.
    Solve {
        #[arg(long)]
        lambda: f64,
    },
    /// Lowest levels from the exact eigensolver.
    Exact {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = BackendChoice::Fd)]
        backend: BackendChoice,
    },
    /// Mapping deviation and neglected-term size for one coupling.
    Diagnose {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Zero-order ground-state amplitude over the right-hand well.
    Wavefunction {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[arg(long)]
        normalize: bool,
    },
}

fn run(cli: &Cli) -> millergood::Result<Report> {
    match cli.command {
        Command::Table => commands::table(cli.tol),
        Command::Figure { from, to, step } => commands::figure(from, to, step, cli.tol),
        Command::Solve { lambda } => commands::solve(lambda),
        Command::Exact { lambda, k, backend } => commands::exact_levels(lambda, k, cli.tol, backend),
        Command::Diagnose { lambda, grid } => commands::diagnose(lambda, grid),
        Command::Wavefunction {
            lambda,
            grid,
            normalize,
        } => commands::wavefunction_samples(lambda, grid, normalize),
    }
}

fn sink(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }

    let mut out = match sink(&cli.out) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: cannot open output: {e}");
            return ExitCode::from(2);
        }
    };

    let status = match run(&cli) {
        Ok(report) => match report.write(cli.format, &mut out) {
            Ok(()) => report.status,
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(err) => {
            let status = if err.is_numerical() { 1 } else { 2 };
            match cli.format {
                Format::Json => {
                    let obj = json!({ "error": { "kind": err.kind(), "message": err.to_string() } });
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&obj).expect("json"));
                }
                Format::Csv => eprintln!("error[{}]: {err}", err.kind()),
            }
            status
        }
    };
    if let Err(e) = out.flush() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(status as u8)
}
