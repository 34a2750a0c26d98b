//! `fano2`: enumerate, inspect and verify Hilbert series of index-2 Fano 3-folds.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fano_index2::exactnum::DEFAULT_CUTOFF;

/// Smallest cutoff accepted for table verification; the largest tabulated
/// numerator has degree 45.
pub const MIN_VERIFY_CUTOFF: usize = 50;

#[derive(Debug, Parser)]
#[command(name = "fano2", version, about = "Hilbert series of Fano 3-folds of index 2")]
pub struct Cli {
    /// Truncation degree of every series.
    #[arg(long, global = true, default_value_t = DEFAULT_CUTOFF as u32, value_parser = clap::value_parser!(u32).range(2..=2000))]
    pub cutoff: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HistogramBy {
    Genus,
    Codim,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every candidate Hilbert series.
    Enumerate {
        /// Only candidates satisfying the stable degree bound.
        #[arg(long)]
        stable: bool,
    },
    /// Report on a single basket and genus.
    Inspect {
        /// Basket such as "2x3/1,5/2"; empty for none.
        #[arg(long, allow_hyphen_values = true)]
        basket: String,
        #[arg(long, allow_negative_numbers = true)]
        genus: i64,
    },
    /// Check the tabulated families against the Riemann-Roch series.
    VerifyTables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        table: Option<u8>,
        /// Use this fixture instead of the built-in one.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Candidate counts by genus or by estimated codimension.
    Histogram {
        #[arg(long, value_enum, default_value_t = HistogramBy::Genus)]
        by: HistogramBy,
    },
    /// List candidates whose singular rank is too large for a K3 section.
    K3Obstructions,
}

/// Failure modes and their exit codes.
#[derive(Debug)]
pub enum Failure {
    /// A check failed; the report has been written.
    Verification,
    Usage(String),
    InadmissibleBasket(String),
    NonpositiveDegree(String),
    GenusBelowMinimum(String),
    Io(String),
    /// `A^3` exceeds the Kawamata bound, so there is no candidate record.
    DegreeTooLarge(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Usage(_) => 2,
            Failure::InadmissibleBasket(_) => 3,
            Failure::NonpositiveDegree(_) => 4,
            Failure::GenusBelowMinimum(_) => 5,
            Failure::Io(_) => 6,
            Failure::DegreeTooLarge(_) => 7,
        }
    }

    fn message(&self) -> Option<&str> {
        match self {
            Failure::Verification => None,
            Failure::Usage(m)
            | Failure::InadmissibleBasket(m)
            | Failure::NonpositiveDegree(m)
            | Failure::GenusBelowMinimum(m)
            | Failure::Io(m)
            | Failure::DegreeTooLarge(m) => Some(m),
        }
    }
}

/// A finished report: the main body and an optional summary line, which
/// goes after the body for text output and to standard error otherwise.
pub struct Report {
    pub body: String,
    pub footer: Option<String>,
}

fn emit(cli: &Cli, report: &Report) -> Result<(), Failure> {
    let mut body = report.body.clone();
    let footer_in_body = cli.format == Format::Text;
    if let (true, Some(f)) = (footer_in_body, &report.footer) {
        body.push_str(f);
        body.push('\n');
    }
    match &cli.output {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}")))?,
    }
    if let (false, Some(f)) = (footer_in_body, &report.footer) {
        eprintln!("{f}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli).and_then(|(report, verdict)| {
        emit(&cli, &report)?;
        verdict
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if let Some(m) = failure.message() {
                eprintln!("error: {m}");
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
