//! Command-line front end for the `P(x² − 1) <= K` solver.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod report;
pub mod results;

pub use results::{Claim, FileRecord, ResultFile, Source};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "stormer",
    version,
    about = "Find every x with all prime factors of x² − 1 at most K"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full search and write a result file.
    Search(SearchArgs),
    /// Re-check every record of a result file by trial division.
    Verify { file: PathBuf },
    /// Summarise a complete result file.
    Report { file: PathBuf },
    /// Brute-force scan of x up to a limit.
    Oracle {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect the Pell equation for one modulus.
    Pell(PellArgs),
}

#[derive(Debug, clap::Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub k: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue from an existing checkpoint.
    #[arg(long, requires = "checkpoint", conflicts_with = "restart")]
    pub resume: bool,
    /// Discard an existing checkpoint and start over.
    #[arg(long, requires = "checkpoint")]
    pub restart: bool,
    /// auto, exact or compact.
    #[arg(long, default_value = "auto")]
    pub mode: String,
    /// Acceptance tolerance for the log test.
    #[arg(long, default_value_t = 0.5)]
    pub tolerance: f64,
    /// Form operations allowed per regulator.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, default_value_t = stormer_core::sieve::DEFAULT_CHUNK_SIZE)]
    pub chunk_size: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Stop after this many chunks, leaving the checkpoint behind.
    #[arg(long, hide = true)]
    pub stop_after_chunks: Option<usize>,
}

#[derive(Debug, clap::Args)]
pub struct PellArgs {
    #[arg(long)]
    pub d: u64,
    /// Print the n-th power of the fundamental solution.
    #[arg(long)]
    pub n: Option<u64>,
    /// Reduce the n-th power modulo this number.
    #[arg(long = "mod", requires = "n")]
    pub modulus: Option<String>,
    /// Scan the tower of d for solutions under this prime bound.
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, default_value = "auto")]
    pub mode: String,
}

/// Parse `args` (including the program name) and run the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match commands::dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            commands::exit_code(&e)
        }
    }
}
