//! `nmr`: command-line front end for the nonmonotonic reasoning kernel.
//!
//! Exit codes are a stable contract: 0 success, 1 usage or parse error,
//! 2 semantic error (caps, zero mass, non-normal theory where normality
//! is required), 3 cross-check failure.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use nmr_core::Error;

#[derive(Parser)]
#[command(
    name = "nmr",
    version,
    about = "Default-logic extensions, sequential thresholding, partition sequences, and extension ranking over weighted possible worlds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Args, Clone, Debug)]
pub struct CommonArgs {
    /// Output format: human-readable text or structured JSON.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Override the proposition-count cap (default 20).
    #[arg(long)]
    pub max_props: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// List every extension of the default theory in FILE.
    Extensions {
        file: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Enumerate filtered sequences of the threshold collection in FILE.
    Threshold {
        file: PathBuf,
        /// Weight file; the uniform model is used when omitted.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Sequential threshold parameter in [0, 1), e.g. 1/4 or 0.25.
        #[arg(long)]
        epsilon: String,
        /// Report the final-context probability of this formula (repeatable).
        #[arg(long = "query")]
        queries: Vec<String>,
        /// Emit every acceptance order instead of one witness per accepted set.
        #[arg(long)]
        all_orders: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Enumerate possible-world partition sequences for FILE.
    Partitions {
        file: PathBuf,
        /// Rule source: the theory's defaults or its threshold formulas.
        #[arg(long, value_enum)]
        mode: commands::PartitionMode,
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Required in threshold mode.
        #[arg(long)]
        epsilon: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Rank extensions by the smallest parameter that replays them.
    Rank {
        file: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Cross-check the engines against each other on FILE.
    Check {
        file: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        epsilon: Option<String>,
        /// Compare the structured check report against this file; any
        /// difference is a check failure.
        #[arg(long)]
        expect: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// List the worlds satisfying FORMULA.
    Models {
        formula: String,
        /// Comma-separated proposition list fixing the signature order;
        /// inferred from the formula when omitted.
        #[arg(long)]
        props: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Usage and file-content errors exit 1; semantic errors exit 2.
fn exit_code_for(err: &Error) -> u8 {
    match err.root() {
        Error::Syntax(_)
        | Error::UnknownProposition(_)
        | Error::InvalidName(_)
        | Error::DuplicateProposition(_)
        | Error::InvalidRational { .. }
        | Error::NegativeWeight { .. }
        | Error::DuplicateWeightEntry { .. }
        | Error::DuplicateRuleName(_)
        | Error::DuplicateThreshold(_)
        | Error::EpsilonOutOfRange(_)
        | Error::InvalidStrategy => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Extensions { file, common } => commands::cmd_extensions(&file, &common),
        Command::Threshold {
            file,
            weights,
            epsilon,
            queries,
            all_orders,
            common,
        } => commands::cmd_threshold(&file, weights.as_deref(), &epsilon, &queries, all_orders, &common),
        Command::Partitions {
            file,
            mode,
            weights,
            epsilon,
            common,
        } => commands::cmd_partitions(&file, mode, weights.as_deref(), epsilon.as_deref(), &common),
        Command::Rank {
            file,
            weights,
            common,
        } => commands::cmd_rank(&file, weights.as_deref(), &common),
        Command::Check {
            file,
            weights,
            epsilon,
            expect,
            common,
        } => commands::cmd_check(
            &file,
            weights.as_deref(),
            epsilon.as_deref(),
            expect.as_deref(),
            &common,
        ),
        Command::Models {
            formula,
            props,
            common,
        } => commands::cmd_models(&formula, props.as_deref(), &common),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
