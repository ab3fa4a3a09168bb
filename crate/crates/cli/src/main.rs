mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Compute p-curvatures of differential systems and operators over F_p(x).
#[derive(Debug, Parser)]
#[command(name = "pcurv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// p-curvature of a system Y' = A Y.
    Compute(ComputeArgs),
    /// p-curvature of a differential operator.
    ComputeOperator(ComputeArgs),
    /// Power series solutions at x = 0 in the divided power basis.
    Solutions(SolutionsArgs),
    /// Compare the fast algorithm with the Katz recurrence.
    Verify(VerifyArgs),
    /// Time both algorithms on seeded random systems and print CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Fast,
    Katz,
    SingleModulus,
}

impl AlgorithmArg {
    pub fn core(self) -> pcurv::Algorithm {
        match self {
            AlgorithmArg::Fast => pcurv::Algorithm::Fast,
            AlgorithmArg::Katz => pcurv::Algorithm::Katz,
            AlgorithmArg::SingleModulus => pcurv::Algorithm::SingleModulus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmArg::Fast => "fast",
            AlgorithmArg::Katz => "katz",
            AlgorithmArg::SingleModulus => "single-modulus",
        }
    }
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Result file; metadata goes to PATH.meta.json. Defaults to stdout, with
    /// metadata on stderr.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "fast")]
    algorithm: AlgorithmArg,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Args)]
pub struct SolutionsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Number of coefficients.
    #[arg(long)]
    precision: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value = "fast")]
    algorithm: AlgorithmArg,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Refuse instances with p * d * r^2 above this bound.
    #[arg(long, default_value_t = 50_000_000)]
    max_work: u64,
    /// Perturb the fast result before comparing (for testing the harness).
    #[arg(long, hide = true)]
    corrupt_fast: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    r: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run only this algorithm; by default fast and katz are both timed.
    #[arg(long, value_enum)]
    algorithm: Option<AlgorithmArg>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    output: Option<PathBuf>,
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
    let result = match cli.command {
        Command::Compute(a) => commands::compute(&a, false),
        Command::ComputeOperator(a) => commands::compute(&a, true),
        Command::Solutions(a) => commands::solutions(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Bench(a) => commands::bench(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
