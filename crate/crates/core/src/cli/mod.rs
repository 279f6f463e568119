//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 usage error, 2 input data error, 3 some tasks or
//! inputs failed while the rest completed.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::dataset::FeatureMode;
use crate::embed::Method;
use crate::learn::ClassifierSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

/// Seed override for every command that draws random numbers.
pub const SEED_ENV: &str = "BUGVEC_SEED";
/// Worker-thread override for `grid` and `permute`.
pub const WORKERS_ENV: &str = "BUGVEC_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "bugvec", version, about = "AST embeddings and code metrics for bug prediction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Flatten Java sources or JSON syntax trees into a token corpus
    Flatten(FlattenArgs),
    /// Train paragraph vectors on a corpus
    Embed(EmbedArgs),
    /// Join vectors, metrics and labels into one feature table
    Featurize(FeaturizeArgs),
    /// Cross-validate classifiers on one feature table
    Eval(EvalArgs),
    /// Train every embedding configuration and cross-validate each
    Grid(GridArgs),
    /// Cross-validate on label-permuted copies of the data
    Permute(PermuteArgs),
    /// Summarize report files
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct FlattenArgs {
    /// `.java` files, `.json` tree files, or directories searched recursively
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Corpus file to write
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct HyperArgs {
    /// Training method: pvdm or pvdbow
    #[arg(long, default_value = "pvdm")]
    pub method: Method,
    /// Vector size
    #[arg(long, default_value_t = 25)]
    pub dim: usize,
    /// Context radius on each side
    #[arg(long, default_value_t = 12)]
    pub window: usize,
    /// Passes over the corpus
    #[arg(long, default_value_t = 80)]
    pub epochs: usize,
    /// Noise samples per positive pair
    #[arg(long, default_value_t = 5)]
    pub negatives: usize,
    /// Initial learning rate
    #[arg(long, default_value_t = 0.025)]
    pub alpha_start: f64,
    /// Final learning rate
    #[arg(long, default_value_t = 0.0001)]
    pub alpha_end: f64,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Corpus file from `flatten`
    #[arg(short, long)]
    pub corpus: PathBuf,
    /// Model file to write
    #[arg(long)]
    pub model: PathBuf,
    /// Document-vector CSV to write
    #[arg(long)]
    pub vectors: PathBuf,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Random seed
    #[arg(long, env = SEED_ENV, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Feature set: embedding, metrics or combined
    #[arg(long, default_value = "embedding")]
    pub mode: FeatureMode,
    /// Document-vector CSV (embedding and combined modes)
    #[arg(long)]
    pub vectors: Option<PathBuf>,
    /// Metrics CSV (metrics and combined modes)
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    /// Label CSV with doc_id and bug_count columns
    #[arg(long)]
    pub labels: PathBuf,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Feature table CSV to write
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    /// Cross-validation folds
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Minority class is upsampled to this share of the majority
    #[arg(long, default_value_t = 0.5)]
    pub upsample: f64,
    /// Random seed
    #[arg(long, env = SEED_ENV, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Classifiers to run (repeatable) [default: the full roster: naive_bayes,
    /// linear, logistic, tree, forest, knn, sdnnc, cdnnc]
    #[arg(long = "classifier")]
    pub classifiers: Vec<ClassifierSpec>,
    #[command(flatten)]
    pub cv: CvArgs,
    /// Directory for report files and summary.txt
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Corpus file from `flatten`
    #[arg(short, long)]
    pub corpus: PathBuf,
    /// Label CSV with doc_id and bug_count columns
    #[arg(long)]
    pub labels: PathBuf,
    /// Metrics CSV, needed for metrics and combined modes
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    /// Feature sets to evaluate (repeatable)
    #[arg(long = "mode", default_values = ["embedding"])]
    pub modes: Vec<FeatureMode>,
    /// Training methods (comma-separated)
    #[arg(long, value_delimiter = ',', default_values = ["pvdm", "pvdbow"])]
    pub methods: Vec<Method>,
    /// Vector sizes (comma-separated)
    #[arg(long, value_delimiter = ',', default_values_t = [25, 50, 75, 150])]
    pub dims: Vec<usize>,
    /// Context radii (comma-separated)
    #[arg(long, value_delimiter = ',', default_values_t = [4, 8, 12])]
    pub windows: Vec<usize>,
    /// Epoch counts (comma-separated)
    #[arg(long, value_delimiter = ',', default_values_t = [6, 10, 20, 40, 60, 80, 100])]
    pub epochs: Vec<usize>,
    /// Noise samples per positive pair
    #[arg(long, default_value_t = 5)]
    pub negatives: usize,
    /// Initial learning rate
    #[arg(long, default_value_t = 0.025)]
    pub alpha_start: f64,
    /// Final learning rate
    #[arg(long, default_value_t = 0.0001)]
    pub alpha_end: f64,
    /// Classifiers to run (repeatable) [default: the full roster]
    #[arg(long = "classifier")]
    pub classifiers: Vec<ClassifierSpec>,
    #[command(flatten)]
    pub cv: CvArgs,
    /// Worker threads [default: available parallelism]
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    /// Print the schedule and exit without training
    #[arg(long)]
    pub plan: bool,
    /// Directory for report files, failures.json and summary.txt
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct PermuteArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Classifier to run
    #[arg(long, default_value = "logistic")]
    pub classifier: ClassifierSpec,
    /// Number of label permutations
    #[arg(short, long, default_value_t = 20)]
    pub n: usize,
    #[command(flatten)]
    pub cv: CvArgs,
    /// Worker threads [default: available parallelism]
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    /// Directory for report files and summary.txt
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Report files, or directories holding them
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Write the summary here instead of standard output
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Flatten(a) => commands::flatten(&a),
        Command::Embed(a) => commands::embed(&a),
        Command::Featurize(a) => commands::featurize(&a),
        Command::Eval(a) => commands::eval(&a),
        Command::Grid(a) => commands::grid(&a),
        Command::Permute(a) => commands::permute(&a),
        Command::Report(a) => commands::report(&a),
    }
}
