mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Temperley-Lieb diagrams, oriented-diagram functionals and the metric of the
/// U_q(sl2)-invariant XXZ chain with q = exp(i pi / r).
#[derive(Debug, Parser)]
#[command(name = "tlgns", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Number of sites.
    #[arg(long = "N", value_name = "N")]
    pub n_sites: usize,
    /// Root-of-unity parameter; repeat for a sweep.
    #[arg(long = "r", value_name = "R", required = true)]
    pub r: Vec<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the algebra, symmetry and metric relations.
    Relations {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Evaluate omega_n on a word.
    Omega {
        #[command(flatten)]
        common: Common,
        /// Sector: number of down arrows.
        #[arg(long = "n", value_name = "n")]
        sector: usize,
        /// Space-separated generator indices, e.g. "2 2 3 1 2"; empty for the unit.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        word: String,
        /// Include the diagram and a text drawing.
        #[arg(long)]
        render: bool,
    },
    /// Word bases, Gram matrices and strand-count tables.
    Gram {
        #[command(flatten)]
        common: Common,
        #[arg(long = "n", value_name = "n")]
        sector: Option<usize>,
        /// Explicit basis as ';'-separated words, e.g. ";2;1 2".
        #[arg(long)]
        words: Option<String>,
        #[arg(long)]
        max_word_len: Option<usize>,
    },
    /// The metric and the two charge operators as sparse triplets.
    Eta {
        #[command(flatten)]
        common: Common,
        /// Sum only over restricted paths (r <= N allowed; results unchecked).
        #[arg(long)]
        restricted: bool,
    },
    /// Eigenvalues of H and of its Hermitian counterpart h.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Compare the GNS product with the metric product on every sector.
    Conjecture {
        #[command(flatten)]
        common: Common,
        #[arg(long = "n", value_name = "n")]
        sector: Option<usize>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random words per sector, in addition to the basis.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        max_word_len: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Relations { common, tol } => commands::relations(&common, tol),
        Command::Omega {
            common,
            sector,
            word,
            render,
        } => commands::omega(&common, sector, &word, render),
        Command::Gram {
            common,
            sector,
            words,
            max_word_len,
        } => commands::gram(&common, sector, words.as_deref(), max_word_len),
        Command::Eta { common, restricted } => commands::eta(&common, restricted),
        Command::Spectrum { common } => commands::spectrum(&common),
        Command::Conjecture {
            common,
            sector,
            tol,
            seed,
            samples,
            max_word_len,
        } => commands::conjecture(&common, sector, tol, seed, samples, max_word_len),
    };
    match result {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
