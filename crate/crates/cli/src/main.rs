//! `fqbound`: point counts and point-count bounds for curves over finite
//! fields.
//!
//! Exit codes: 0 success, 1 unexpected bound violation or failed check,
//! 2 input error, 3 resource limit.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "fqbound", version, about = "Rational points and point-count bounds for curves over finite fields")]
struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
pub struct CurveSource {
    /// Curve file (JSON).
    #[arg(long)]
    curve: Option<std::path::PathBuf>,
    /// Catalog entry, e.g. `twisted-cubic(2)`.
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Count GF(q^m)-points of a curve.
    Count {
        #[command(flatten)]
        source: CurveSource,
        /// Count over GF(q^m).
        #[arg(long, default_value_t = 1)]
        ext: u32,
        /// Print the points.
        #[arg(long)]
        list_points: bool,
    },
    /// Count points and check every applicable bound.
    Verify {
        #[command(flatten)]
        source: CurveSource,
    },
    /// Evaluate the bounds for given d, q, r.
    Bounds {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u64,
    },
    /// s-degree of a point set and the combinatorial bound.
    Sdeg {
        /// File `{"field": {...}, "r": r, "points": [[...], ...]}`.
        #[arg(long)]
        points: std::path::PathBuf,
    },
    /// Random subsets of PG(r, q) against the double count and the
    /// combinatorial bound.
    Arcsuite {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Subset sizes, used in turn; default 3..=10.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
    },
    /// Hyperplane excess at the center of one or more branches.
    Lemma {
        /// Branch file.
        #[arg(long)]
        branch: Option<std::path::PathBuf>,
        /// Further branches at the same center.
        #[arg(long, num_args = 1..)]
        branches: Vec<std::path::PathBuf>,
        /// Built-in branch `rational-normal(r,q)`.
        #[arg(long, conflicts_with_all = ["branch", "branches"])]
        catalog: Option<String>,
        /// Require the branch field to have this order.
        #[arg(long)]
        q: Option<u64>,
        /// Truncation for the built-in branch (default 4r).
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Scan all degree-d plane forms over GF(q) up to scalars.
    ScanPlane {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u32,
        /// Lift the cap on the number of forms.
        #[arg(long)]
        allow_large: bool,
    },
    /// Run every module self-check.
    Suite {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        precision: Option<usize>,
    },
    /// List the catalog.
    CatalogList,
    /// Apply a projective change of coordinates to a curve or branch file.
    Transform {
        #[arg(long, required_unless_present = "branch", conflicts_with = "branch")]
        curve: Option<std::path::PathBuf>,
        #[arg(long)]
        branch: Option<std::path::PathBuf>,
        /// Matrix as JSON rows of element indices, or a file holding it.
        #[arg(long)]
        matrix: String,
    },
}

fn init_threads() -> Result<(), commands::CliError> {
    let Ok(value) = std::env::var("FQBOUND_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| commands::CliError::Input(format!("FQBOUND_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| commands::CliError::Input(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = init_threads().and_then(|()| commands::run(cli.command, cli.json));
    match outcome {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
