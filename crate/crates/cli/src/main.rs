//! `tempo`: command-line front end for periodic temporal graph realization.
//!
//! Every command prints exactly one document on stdout (JSON, or CSV for
//! `distances --format csv`) and a one-line summary on stderr.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tempo_core::SearchConfig;

use report::Outcome;

#[derive(Parser)]
#[command(name = "tempo", version, about = "Periodic temporal graph realization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Budget {
    /// Stop the search after this many assignments.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Stop the search after this many milliseconds. Results then depend on
    /// machine speed; use --max-nodes for reproducible runs.
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Do not fix the first label to 0.
    #[arg(long)]
    no_symmetry: bool,
    /// Worker threads for the search.
    #[arg(long, env = "TEMPO_THREADS")]
    threads: Option<usize>,
}

impl Budget {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            max_nodes: self.max_nodes,
            timeout: self.timeout_ms.map(Duration::from_millis),
            symmetry_breaking: !self.no_symmetry,
            threads: self.threads,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReduceKind {
    Coloring,
    Nae3sat,
    Ttr2dittr,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance file and report its class and slack.
    Validate { instance: PathBuf },
    /// Decide feasibility and print a certificate.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        budget: Budget,
        /// Enumerate every solution (one per shift class unless --no-symmetry).
        #[arg(long)]
        all: bool,
        /// Write the witness labeling here when feasible.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a labeling against an instance.
    Check { instance: PathBuf, labeling: PathBuf },
    /// Build a gadget; FAMILY is a family name or `auto`.
    Gadget {
        family: String,
        delta: u32,
        k: u32,
        /// Also write the bare instance here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the gadget metadata here.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        /// Include a reference labeling.
        #[arg(long)]
        reference: bool,
    },
    /// Build an instance from another problem.
    Reduce {
        kind: ReduceKind,
        input: PathBuf,
        /// Period for the colouring reduction.
        #[arg(long, default_value_t = 3)]
        delta: u32,
        /// Slack class for the tree reduction.
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// Mirror every edge and bound (NAE reduction).
        #[arg(long)]
        symmetric: bool,
    },
    /// Certify a gadget document by exhaustive search.
    Certify {
        gadget: PathBuf,
        #[command(flatten)]
        budget: Budget,
    },
    /// Print static distances and, with a labeling, fastest durations.
    Distances {
        instance: PathBuf,
        #[arg(long)]
        labeling: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Validate { instance } => commands::validate(&instance),
        Command::Solve {
            instance,
            budget,
            all,
            out,
        } => commands::solve(&instance, &budget.config(), all, out.as_deref()),
        Command::Check { instance, labeling } => commands::check(&instance, &labeling),
        Command::Gadget {
            family,
            delta,
            k,
            out,
            sidecar,
            reference,
        } => commands::gadget(&family, delta, k, out.as_deref(), sidecar.as_deref(), reference),
        Command::Reduce {
            kind,
            input,
            delta,
            k,
            symmetric,
        } => match kind {
            ReduceKind::Coloring => commands::reduce_coloring(&input, delta),
            ReduceKind::Nae3sat => commands::reduce_nae(&input, symmetric),
            ReduceKind::Ttr2dittr => commands::reduce_ttr(&input, k),
        },
        Command::Certify { gadget, budget } => commands::certify(&gadget, &budget.config()),
        Command::Distances {
            instance,
            labeling,
            format,
        } => commands::distances(&instance, labeling.as_deref(), format == Format::Json),
    };
    result.unwrap_or_else(Outcome::input_error)
}

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    outcome.emit();
    ExitCode::from(outcome.exit as u8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Exit;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn budget_flags_reach_the_config() {
        let b = Budget {
            max_nodes: Some(5),
            timeout_ms: Some(10),
            no_symmetry: true,
            threads: Some(2),
        };
        let cfg = b.config();
        assert_eq!(cfg.max_nodes, Some(5));
        assert_eq!(cfg.timeout, Some(Duration::from_millis(10)));
        assert!(!cfg.symmetry_breaking);
        assert_eq!(cfg.threads, Some(2));
        assert_eq!(Exit::Unknown as u8, 3);
    }
}
