//! `smale-lab`: evaluate, generate, verify, rescale and search.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 domain error (or a
//! verification run with a failed assertion), 3 conditioning failure (or a
//! cross-check outside `--tol`).

mod commands;
mod output;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "smale-lab",
    version,
    about = "Smale quotients of finite Blaschke products"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Master seed for sampling and search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Agreement tolerance for cross-check flags. Defaults: family 1e-8,
    /// rescale 1e-10, search 1e-10.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the artifact here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Omit the meta block (version, timestamp, elapsed time).
    #[arg(long, global = true)]
    pub no_meta: bool,
    /// Also write the product as a product file (quotients, family, search).
    #[arg(long, global = true)]
    pub product_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Smale quotients of one normalized product.
    Quotients(QuotientsArgs),
    /// Extremal family member with closed-form cross-check.
    #[command(subcommand)]
    Family(FamilyArgs),
    /// Invariant battery over sampled products.
    Verify(VerifyArgs),
    /// Rescaling experiment toward the polynomial quotients.
    Rescale(RescaleArgs),
    /// Multi-start search for the extremal constants.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct ProductSource {
    /// Comma-separated zeros, e.g. `0,0.5,-0.2+0.3i`.
    #[arg(long, allow_hyphen_values = true)]
    pub zeros: Option<String>,
    /// Product file `{degree, rotation, zeros: [{re, im}]}`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct QuotientsArgs {
    #[command(flatten)]
    pub source: ProductSource,
    /// Rotation `α` of inline zeros (radians).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub rotation: f64,
}

#[derive(Subcommand, Debug)]
pub enum FamilyArgs {
    /// `z (z^d - α^d) / (1 - α^d z^d)`, `d = n - 1`.
    Thm2 {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
    },
    /// `C ∘ M` with a single critical point `-a` of multiplicity `n - 1`.
    Thm4 {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Stated,
    Koebe4,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Degrees: `4`, `2..8` (inclusive), `2..=8` or `2,3,5`.
    #[arg(long, default_value = "2..8")]
    pub n: String,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Extra product files (a product or a list of products) to check.
    #[arg(long)]
    pub include_file: Vec<PathBuf>,
    /// Report only this first-inequality column; both by default.
    #[arg(long, value_enum)]
    pub bound_variant: Option<VariantArg>,
}

#[derive(Args, Debug)]
pub struct RescaleArgs {
    /// Nonzero polynomial zeros `a_i` of `P(z) = z ∏ (z - a_i)`.
    #[arg(long, allow_hyphen_values = true)]
    pub zeros: String,
    /// Scales, e.g. `10,100`.
    #[arg(long, default_value = "10,100")]
    pub m: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchTarget {
    Kn,
    Ln,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(value_enum)]
    pub target: SearchTarget,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    /// Objective evaluations per restart.
    #[arg(long, default_value_t = 2000)]
    pub budget: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(&cli) {
        Ok(status) => status.into(),
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code().into()
        }
    }
}
