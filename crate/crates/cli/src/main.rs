//! `tourney`: batch front end. Exit codes: 0 success, 1 negative decision,
//! 2 budget exhausted, 3 input error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tourney::format::GraphFormat;

#[derive(Debug, Parser)]
#[command(name = "tourney", version, about = "Tournament colorability and H-freeness toolkit")]
pub struct Cli {
    /// Seed for every randomized stage.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Node budget for each exponential search; unlimited when absent.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Layout of emitted tournaments.
    #[arg(long, global = true, default_value = "matrix")]
    pub format: GraphFormat,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Acyclic k-coloring of an oriented graph.
    Color {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Exact acyclic chromatic number.
    Chromatic { input: PathBuf },
    /// Easy (2-colorable) or hard pattern.
    Classify { pattern: PathBuf },
    /// Copies of a pattern in a host.
    Count { host: PathBuf, pattern: PathBuf },
    /// Minimum reversals making a tournament pattern-free.
    Distance { host: PathBuf, pattern: PathBuf },
    /// Ordered core of a labeled graph.
    Core {
        input: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// The core family of a pattern and its maximal member.
    Kofh {
        pattern: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Seeded k-partite forcing tournament for a pattern.
    ForcingBuild {
        pattern: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Whether every completion of a k-partite tournament contains the pattern.
    ForcingCheck {
        forcing: PathBuf,
        pattern: PathBuf,
        /// Where to write a counterexample completion.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Smallest bipartite forcing tournament by exhaustive search.
    ForcingSearch {
        pattern: PathBuf,
        #[arg(long, default_value_t = 3)]
        m_max: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Homogeneous partition of a 0/1 matrix or tournament avoiding a pattern.
    Regularity {
        input: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, default_value = "1/4")]
        delta: String,
        #[arg(long, default_value_t = 64)]
        max_classes: usize,
        /// Two-level decomposition of a tournament.
        #[arg(long)]
        strong: bool,
    },
    /// Large 3-AP-free subset of 1..=n_max.
    Behrend {
        #[arg(long)]
        n_max: usize,
    },
    /// Union of edge-disjoint transversal cliques, audited.
    Rsgraph {
        #[arg(long)]
        k: usize,
        /// 1-based part indices, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        cycle: Vec<usize>,
        #[arg(long)]
        n_max: usize,
    },
    /// Blow-up tournament for a hard pattern.
    Blowup {
        pattern: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        n_max: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Certify a cut-edge-disjoint family of copies.
        #[arg(long)]
        farness: bool,
        /// Tournament to certify against instead of the blow-up itself.
        #[arg(long, requires = "farness")]
        mutated: Option<PathBuf>,
    },
    /// Checks every copy of the pattern in a blow-up against the tuple set.
    AuditCopies {
        pattern: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        n_max: usize,
    },
    /// Sweeps all 2-colorings of the seven-vertex gadget.
    GadgetVerify,
    /// Tournament of the triangle-free-cut reduction.
    Reduce {
        graph: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Decides both sides of the reduction and compares.
    CheckReduction { graph: PathBuf },
    /// Tournament that is k-colorable iff the input is (k-1)-colorable.
    Lift {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Decide both colorability questions.
        #[arg(long)]
        verify: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match commands::run(&cli) {
        Ok(report) => {
            let text = report.render();
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(3);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(report.status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
