//! Command-line front end for `primezeta`.
//!
//! [`run`] takes the argument list and two output streams and returns the
//! process exit code, so the binary is a one-line wrapper and tests can drive
//! every subcommand in-process.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod format;
pub mod golden;
pub mod report;
pub mod verify;

pub use report::{OutputFormat, RunReport};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const DOMAIN: i32 = 2;
    pub const PRECISION: i32 = 3;
    pub const TABLE_MISMATCH: i32 = 4;
    pub const VERIFY_FAILED: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(
    name = "primezeta",
    version,
    about = "Zeta values from prime products, with certified error bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one product formula.
    Eval(EvalArgs),
    /// Print the exact radicands for k = 2..11.
    AppendixA(FormatArgs),
    /// Reproduce the zeta(k) versus 1000-prime product table.
    Table1(Table1Args),
    /// Run the cross-formula and oracle property checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// euler, magnitude-main, magnitude-cosh, integer-sqrt, integer-rationalized,
    /// alt-product, half-integer-main, half-integer-alt or ratio-identity
    #[arg(long)]
    pub formula: String,
    /// Real part: an integer, `a/b`, or a decimal (read exactly).
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: String,
    /// Imaginary part.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub t: String,
    /// Number of primes, or `auto` to stop once the tail bound is small enough.
    #[arg(long, default_value = "auto")]
    pub primes: String,
    /// Significant decimal digits requested.
    #[arg(long, default_value_t = 15)]
    pub digits: u32,
    /// Working precision in bits (default: enough for --digits plus guard bits).
    #[arg(long)]
    pub precision_bits: Option<u32>,
    /// Ceiling on the prime count in auto mode.
    #[arg(long, default_value_t = primezeta::product::DEFAULT_AUTO_MAX_PRIMES)]
    pub max_primes: u64,
    /// Primes per reduction block.
    #[arg(long, default_value_t = primezeta::primes::DEFAULT_BLOCK_SIZE)]
    pub block_size: usize,
    /// Worker threads, or `auto`. Never changes the result.
    #[arg(long, default_value = "auto")]
    pub threads: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long, default_value_t = 1000)]
    pub primes: u64,
    #[arg(long, default_value_t = 15)]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Level::Quick)]
    pub level: Level,
}

/// Parses `args` (including the program name) and runs the chosen command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    exit::OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    exit::USAGE
                }
            };
        }
    };
    match cli.command {
        Command::Eval(a) => commands::eval(&a, out, err),
        Command::AppendixA(a) => commands::appendix_a(a.format, out, err),
        Command::Table1(a) => commands::table1(&a, out, err),
        Command::Verify(a) => verify::run(a.level, out, err),
    }
}
