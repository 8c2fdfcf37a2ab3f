use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod error;
mod report;

pub const VERSION: &str = concat!("cobham ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Parser)]
#[command(name = "cobham", version, about = "Substitutive sequences, growth types and Cobham checks")]
struct Cli {
    /// Minimum precision, in bits, of printed eigenvalue intervals.
    #[arg(long, global = true, default_value_t = 256, value_parser = clap::value_parser!(u32).range(128..=4096))]
    bits: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// JSON report: spectrum, growth, closed subalphabets, normalization.
    Analyze {
        file: PathBuf,
        /// Also run the periodicity detector on this many letters.
        #[arg(short = 'n', long)]
        prefix: Option<usize>,
    },
    /// Print the first letters of the generated sequence.
    Fixpoint {
        file: PathBuf,
        #[arg(short = 'n', long, default_value_t = 100)]
        prefix: usize,
        /// Print the fixed point itself, before the output coding.
        #[arg(long)]
        raw: bool,
    },
    /// CSV of per-letter growth types and fits.
    Growth {
        file: PathBuf,
        /// Largest iterate used by the empirical fit.
        #[arg(long, default_value_t = 30)]
        n_max: usize,
    },
    /// Rewrite as a non-erasing substitution with a coding.
    Normalize {
        file: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Where to write the JSON sidecar; defaults to the output path with
        /// a .json extension.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        #[arg(long, default_value_t = cobham_core::normalize::DEFAULT_VERIFY_DEPTH)]
        depth: usize,
    },
    /// CSV of return-word statistics.
    Returns {
        file: PathBuf,
        /// Word to analyze; repeatable.
        #[arg(short = 'u', long = "word")]
        words: Vec<String>,
        #[arg(short = 'n', long, default_value_t = 100_000)]
        prefix: usize,
        /// Factor lengths, as `a..b` or `a..=b`, for the recurrence constants.
        #[arg(long)]
        lengths: Option<String>,
    },
    /// JSON verdict of the bounded periodicity search.
    Periodicity {
        file: PathBuf,
        #[arg(short = 'n', long, default_value_t = 100_000)]
        prefix: usize,
        #[arg(long)]
        max_preperiod: Option<usize>,
        #[arg(long)]
        max_period: Option<usize>,
    },
    /// Compare two presentations of one sequence.
    Cobham {
        first: PathBuf,
        second: PathBuf,
        #[arg(short = 'n', long, default_value_t = 100_000)]
        prefix: usize,
        #[arg(long, default_value_t = cobham_core::independence::DEFAULT_BOUND)]
        indep_bound: u32,
        #[arg(long)]
        max_preperiod: Option<usize>,
        #[arg(long)]
        max_period: Option<usize>,
    },
    /// Run the harness on generated periodic pairs with independent
    /// integer eigenvalues.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(short = 'n', long, default_value_t = 10_000)]
        prefix: usize,
    },
    /// List the bundled fixtures, or print one.
    Fixtures { name: Option<String> },
}

fn run(cli: Cli, out: &mut dyn Write) -> error::Result<i32> {
    let bits = cli.bits;
    match cli.command {
        Command::Analyze { file, prefix } => commands::analyze(&file, prefix, bits, out),
        Command::Fixpoint { file, prefix, raw } => commands::fixpoint(&file, prefix, raw, out),
        Command::Growth { file, n_max } => commands::growth(&file, n_max, bits, out),
        Command::Normalize { file, output, sidecar, depth } => {
            commands::normalize(&file, output.as_deref(), sidecar.as_deref(), depth, bits, out)
        }
        Command::Returns { file, words, prefix, lengths } => {
            commands::returns(&file, &words, prefix, lengths.as_deref(), out)
        }
        Command::Periodicity { file, prefix, max_preperiod, max_period } => {
            commands::periodicity(&file, prefix, max_preperiod, max_period, out)
        }
        Command::Cobham { first, second, prefix, indep_bound, max_preperiod, max_period } => {
            let opts = cobham_core::CobhamOptions {
                depth: prefix,
                bound: indep_bound,
                max_preperiod,
                max_period,
                ..Default::default()
            };
            commands::cobham(&first, &second, &opts, bits, out)
        }
        Command::Fuzz { seed, count, prefix } => commands::fuzz(seed, count, prefix, out),
        Command::Fixtures { name } => commands::fixtures(name.as_deref(), out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
