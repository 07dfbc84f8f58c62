mod commands;
mod error;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "charclass", version, about = "Exact genera, Grothendieck-ring classes and stringy invariants")]
pub struct Cli {
    /// Truncation order for power series.
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    pub order: u32,

    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Text)]
    pub output: OutputMode,

    /// Break results down stratum by stratum.
    #[arg(long, global = true)]
    pub relative: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Genus of P^n for a characteristic power series.
    Genus(GenusArgs),
    /// Riemann-Roch for O(d) on P^n.
    Hrr {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Degree of the Hirzebruch class of P^n.
    Ty {
        #[arg(long)]
        n: u32,
    },
    /// Classes in the Grothendieck ring of varieties.
    #[command(subcommand)]
    K0(K0Command),
    /// Proalgebraic value of a tower.
    Pro {
        file: PathBuf,
    },
    /// Stringy invariants of a resolution datum.
    #[command(subcommand)]
    Stringy(StringyCommand),
    /// Motivic integrals of monomial divisors by jet counting.
    #[command(subcommand)]
    Jets(JetsCommand),
}

#[derive(Debug, Args)]
pub struct GenusArgs {
    /// One of chern, todd, lgenus, ahat, hirzebruch.
    #[arg(long)]
    pub series: String,
    #[arg(long)]
    pub n: u32,
    /// Tabulate every dimension from 0 to n.
    #[arg(long)]
    pub sweep: bool,
}

#[derive(Debug, Args)]
pub struct AtomsArg {
    /// JSON file with an `atoms` list.
    #[arg(long)]
    pub atoms: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum K0Command {
    /// Canonical form and realizations of a class.
    Eval {
        expr: String,
        #[command(flatten)]
        atoms: AtomsArg,
    },
    /// chi_y of a class.
    Chiy {
        expr: String,
        #[command(flatten)]
        atoms: AtomsArg,
    },
    /// Euler characteristic of a class.
    Euler {
        expr: String,
        #[command(flatten)]
        atoms: AtomsArg,
    },
    /// Blow-up relation for the classes in a file.
    BlowupCheck { file: PathBuf },
    /// Push constructible functions or relative classes along a chain of maps.
    Pushforward { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum StringyCommand {
    /// Motivic integral in K0 (roots of L adjoined when needed).
    Integral { file: PathBuf },
    /// Stringy E-function.
    Efun { file: PathBuf },
    /// Stringy chi_y.
    Chiy { file: PathBuf },
    /// Stringy Euler number.
    Euler { file: PathBuf },
    /// Compare all invariants of two resolutions.
    Compare { first: PathBuf, second: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum JetsCommand {
    /// Partial sums and closed form of the motivic integral.
    Oracle {
        #[command(flatten)]
        divisor: DivisorArgs,
        #[arg(long)]
        pmax: u32,
    },
    /// Measure of the set of arcs with a given order of contact.
    Measure {
        #[command(flatten)]
        divisor: DivisorArgs,
        #[arg(long)]
        p: u32,
    },
}

#[derive(Debug, Args)]
pub struct DivisorArgs {
    /// Dimension of the affine space; defaults to the number of exponents.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated multiplicities of the coordinate hyperplanes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub exponents: Vec<u32>,
    /// Jet level used for counting.
    #[arg(long)]
    pub level: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = cli.output;
    match commands::run(&cli) {
        Ok(report) => {
            let body = match mode {
                OutputMode::Text => report.text,
                OutputMode::Json => serde_json::to_string_pretty(&report.json).expect("serializable"),
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            report_error(&e, mode);
            ExitCode::from(e.exit_code())
        }
    }
}

fn report_error(e: &CliError, mode: OutputMode) {
    match mode {
        OutputMode::Text => eprintln!("error: {e}"),
        OutputMode::Json => eprintln!("{}", serde_json::to_string_pretty(&e.to_json()).expect("serializable")),
    }
}
