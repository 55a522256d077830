use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod run;

#[derive(Parser, Debug)]
#[command(
    name = "trigrid",
    version,
    about = "Row reduction of triangular resistor grids"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Arithmetic backend; table commands default to float, others to exact.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Float precision in bits.
    #[arg(long, global = true, default_value_t = trigrid::BigFloat::DEFAULT_PRECISION)]
    pub prec: u32,
    /// Largest n accepted in exact mode.
    #[arg(long, global = true, default_value_t = 40)]
    pub exact_ceiling: usize,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Labels {
    /// Every edge 1.
    Uniform1,
    /// The grid built from the edge factors.
    Factors,
}

#[derive(Args, Debug, Clone)]
pub struct GridSource {
    #[arg(long, value_enum, default_value_t = Labels::Uniform1)]
    pub labels: Labels,
    /// Rows of the all-ones grid.
    #[arg(long)]
    pub n: Option<usize>,
    /// Rows of the factor grid.
    #[arg(long)]
    pub c: Option<usize>,
    /// Grid document (JSON) to read instead.
    #[arg(long, conflicts_with_all = ["n", "c"])]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduce a grid by some number of rows and write the result.
    Reduce {
        #[command(flatten)]
        source: GridSource,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Write every intermediate grid, not just the last.
        #[arg(long)]
        all: bool,
    },
    /// Tails of a full reduction.
    Tails {
        #[command(flatten)]
        source: GridSource,
    },
    /// Top tails of the all-ones grid against (1/i)/(2e).
    Table1 {
        #[arg(long, default_value_t = 150)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        rows: usize,
    },
    /// Edge ratios of the all-ones n-grid reduced to c rows.
    Table2 {
        #[arg(long, default_value_t = 150)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        c: usize,
        /// Also write the full conformance report here (CSV).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exact theorem checks, the identity catalog and oracle comparisons.
    Verify {
        #[arg(long)]
        theorem: bool,
        #[arg(long, default_value_t = 2)]
        cmin: usize,
        #[arg(long, default_value_t = 12)]
        cmax: usize,
        #[arg(long)]
        identities: bool,
        /// Restrict the catalog to these names.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        /// Write the JSON ledger here.
        #[arg(long)]
        ledger: Option<PathBuf>,
    },
    /// Corner-to-corner resistance.
    Resistance {
        #[command(flatten)]
        source: GridSource,
        /// Also print r_n / H_n (exploratory).
        #[arg(long)]
        harmonic: bool,
        /// Solve the Laplacian between the bottom corners instead.
        #[arg(long)]
        oracle: bool,
    },
    /// Symmetry checks and upper-half reconstruction of factor grids.
    Isotropy {
        #[arg(long, default_value_t = 2)]
        cmin: usize,
        #[arg(long, default_value_t = 12)]
        cmax: usize,
    },
    /// Compare reduction resistance with the Laplacian solve.
    Oracle {
        #[command(flatten)]
        source: GridSource,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
