//! `cupx`: exact Cheeger constants, q-valences and verification suites for
//! graphs and pairing triples.
//!
//! Exit codes: 0 on success with every check passing, 1 when a check fails,
//! 2 on usage, parse, budget or computation errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cupx::graph::{GraphError, InputFormat};
use cupx::{Budgets, FieldSpec};
use thiserror::Error;

/// Environment variable read when `--jobs` is absent.
const JOBS_ENV: &str = "CUPX_JOBS";

#[derive(Debug, Parser)]
#[command(name = "cupx", version, about = "Graph and pairing-triple expansion toolkit")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
struct RunArgs {
    /// Field for triples built from graphs: gf<p> or rational.
    #[arg(long, global = true, default_value = "gf2")]
    field: FieldSpec,
    /// Cap on vertex subsets (and coordinate subsets) visited.
    #[arg(long, global = true, alias = "budget", default_value_t = Budgets::default().subsets)]
    budget_subsets: u64,
    /// Cap on subspaces visited by exhaustive subspace searches.
    #[arg(long, global = true, default_value_t = Budgets::default().subspaces)]
    budget_subspaces: u64,
    /// Cap on projective bases visited by the exhaustive q-valence search.
    #[arg(long, global = true, default_value_t = Budgets::default().bases)]
    budget_bases: u64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; defaults to CUPX_JOBS, then to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

impl RunArgs {
    fn budgets(&self) -> Budgets {
        Budgets {
            subsets: self.budget_subsets,
            subspaces: self.budget_subspaces,
            bases: self.budget_bases,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
    /// `gen` only: "n m" header then one edge per line.
    Edgelist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphInputFormat {
    Json,
    Edgelist,
}

impl From<GraphInputFormat> for InputFormat {
    fn from(f: GraphInputFormat) -> Self {
        match f {
            GraphInputFormat::Json => InputFormat::Json,
            GraphInputFormat::Edgelist => InputFormat::EdgeList,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Exact subset search; `family-report` falls back to spectral bounds past the budget.
    Exact,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Every subspace (finite fields only).
    Exhaustive,
    /// Only subsets of the distinguished basis.
    Coordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Cycle,
    Path,
    Complete,
    /// Star with the given number of leaves.
    Star,
    RandomRegular,
    /// Margulis-style graph on the m x m torus.
    Margulis,
}

/// A single input file, read from stdin when `-`.
#[derive(Debug, Clone, Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// Graph file format; guessed from the contents when omitted.
    #[arg(long)]
    input_format: Option<GraphInputFormat>,
}

/// Where a list of graphs comes from; the sources are concatenated in this order.
#[derive(Debug, Clone, Args)]
struct GraphSource {
    /// Graph files (repeatable).
    #[arg(long)]
    input: Vec<PathBuf>,
    #[arg(long)]
    input_format: Option<GraphInputFormat>,
    /// Every labeled graph on exactly N vertices.
    #[arg(long, value_name = "N")]
    all_graphs: Option<usize>,
    #[arg(long)]
    family: Option<Family>,
    /// Family sizes, comma separated.
    #[arg(long, value_delimiter = ',', requires = "family")]
    sizes: Vec<usize>,
    /// Degree for random-regular.
    #[arg(long)]
    degree: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Vertex Cheeger constant of a graph.
    GraphH {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
    },
    /// Cheeger constant of a triple (or of a graph's triple over --field).
    TripleH {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Method::Exhaustive)]
        method: Method,
    },
    /// q-valence of a triple (or of a graph's triple over --field).
    Qvalence {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Method::Exhaustive)]
        method: Method,
    },
    /// Whether a triple is pairing-connected, with a witness when it is not.
    Connectedness {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Cohomology triple of a graph over --field.
    BuildTriple {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Append a symmetric coordinate at a basis vector.
    Augment {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0)]
        pivot: usize,
    },
    /// Check the graph/triple dictionary on every graph of a family.
    VerifyTheorem {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Check the augmentation inequalities on every graph of a family.
    VerifyAugmentation {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Per-member table and verdict for a family of graphs or triples.
    FamilyReport {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Also compute each graph's triple over --field.
        #[arg(long)]
        with_triples: bool,
        /// Valence bound the family must respect; a member above it exits with status 1.
        #[arg(long)]
        valence_bound: Option<usize>,
    },
    /// Emit one member of a graph family.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pairing(#[from] cupx::pairing::PairingError),
    #[error(transparent)]
    Family(#[from] cupx::family::FamilyError),
    #[error(transparent)]
    Field(#[from] cupx::FieldError),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

fn worker_count(jobs: Option<usize>) -> Result<Option<usize>, CliError> {
    let n = match jobs {
        Some(n) => n,
        None => match std::env::var(JOBS_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{JOBS_ENV} must be a positive integer, got {s:?}")))?,
            Err(_) => return Ok(None),
        },
    };
    if n == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    Ok(Some(n))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Some(n) = worker_count(cli.run.jobs)? {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let outcome = commands::execute(&cli.command, &cli.run)?;
    let text = output::render(&outcome, cli.run.format)?;
    print!("{text}");
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("cupx: error: {e}");
            ExitCode::from(2)
        }
    }
}
