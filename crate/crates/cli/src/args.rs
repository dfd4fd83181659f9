use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use comment_lens::corpus::{CACHE_ENV, DEFAULT_CACHE_DIR, DEFAULT_PER_FILE_CAP};
use comment_lens::eval::DEFAULT_SMOOTHING;
use comment_lens::syntax::Language;
use comment_lens::tree::DEFAULT_MIN_EXAMPLES;

#[derive(Debug, Parser)]
#[command(
    name = "comment-lens",
    version,
    about = "Comment extent, target and category analysis for Java and Python"
)]
pub struct Cli {
    /// Worker threads for ingest and classify [default: logical cores]
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// More log output (-v info, -vv debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LanguageArg {
    Java,
    Python,
}

impl From<LanguageArg> for Language {
    fn from(l: LanguageArg) -> Language {
        match l {
            LanguageArg::Java => Language::Java,
            LanguageArg::Python => Language::Python,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Task {
    Extent,
    Target,
    Category,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LabelTask {
    Target,
    Category,
}

/// Trained models; `--models DIR` looks for extent.json, target.json and
/// category.json, and the single-model flags override it.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_name = "DIR")]
    pub models: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub extent_model: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub target_model: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub category_model: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse every project of a manifest into a corpus store
    Ingest {
        /// Lines of name<TAB>origin[<TAB>revision]
        #[arg(long)]
        manifest: PathBuf,
        /// Store directory to create
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        language: Option<LanguageArg>,
        /// Group comment tokens with this extent model instead of the merge rule
        #[arg(long, value_name = "FILE")]
        extent_model: Option<PathBuf>,
        /// Attach heuristic target and category labels
        #[arg(long)]
        bootstrap_labels: bool,
        /// Clone cache for remote projects
        #[arg(long, env = CACHE_ENV, default_value = DEFAULT_CACHE_DIR)]
        cache: PathBuf,
    },
    /// Draw a seeded random sample of comments for annotation
    Sample {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = DEFAULT_PER_FILE_CAP)]
        per_file_cap: usize,
        /// Output file [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Category shares per project
    Stats {
        #[arg(long)]
        store: PathBuf,
        #[command(flatten)]
        models: ModelArgs,
        /// Only the projects with the most comments
        #[arg(long)]
        top: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Rank verb and noun pairs by the number of projects using them
    Mine {
        #[arg(long)]
        store: PathBuf,
        #[command(flatten)]
        models: ModelArgs,
        #[arg(long, default_value = "Postcondition")]
        category: String,
        #[arg(long, default_value_t = 20)]
        top: usize,
        #[arg(long)]
        json: bool,
    },
    /// Find classified comments containing every given word
    Grep {
        #[arg(long)]
        store: PathBuf,
        #[command(flatten)]
        models: ModelArgs,
        #[arg(long, default_value = "Postcondition")]
        category: String,
        #[arg(required = true)]
        words: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Train a decision tree from labeled records
    Train {
        #[arg(long, value_enum)]
        task: Task,
        /// Store holding the sources of the records
        #[arg(long)]
        store: PathBuf,
        /// Labeled records [default: every record of the store]
        #[arg(long)]
        records: Vec<PathBuf>,
        /// Model file; the rules dump is written next to it
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MIN_EXAMPLES)]
        min_examples: usize,
        #[arg(long, default_value_t = comment_lens::category::DEFAULT_WORD_CAP)]
        word_cap: usize,
    },
    /// Classify target and category of every record
    Classify {
        #[arg(long)]
        store: PathBuf,
        #[command(flatten)]
        models: ModelArgs,
        /// Records to classify [default: every record of the store]
        #[arg(long)]
        records: Option<PathBuf>,
        /// Output file [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rename syntax kinds in a model for another language
    Adapt {
        #[arg(long)]
        model: PathBuf,
        /// Two-column kind table [default: bundled Java to Python table]
        #[arg(long)]
        mapping: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Confusion matrix, precision, recall and F1
    Eval {
        #[arg(long, value_enum, default_value = "category")]
        task: LabelTask,
        /// Lines of actual<TAB>predicted
        #[arg(long, conflicts_with_all = ["gold", "predicted"])]
        pairs: Option<PathBuf>,
        /// Records with reference labels
        #[arg(long, requires = "predicted")]
        gold: Option<PathBuf>,
        /// Records with predicted labels, matched to gold by id
        #[arg(long, requires = "gold")]
        predicted: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Agreement between annotators over exported sessions
    Agree {
        #[arg(required = true)]
        exports: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "category")]
        task: LabelTask,
        #[arg(long)]
        json: bool,
    },
    /// Distance between the label distributions of two record sets
    Kl {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long, value_enum, default_value = "category")]
        task: LabelTask,
        #[arg(long, default_value_t = DEFAULT_SMOOTHING)]
        alpha: f64,
        #[arg(long)]
        json: bool,
    },
    /// Serve the annotation API and the browser tool
    Annotate {
        #[arg(long)]
        serve: bool,
        /// Records to annotate, e.g. the output of `sample`
        #[arg(long)]
        tasks: PathBuf,
        /// Directory of per-session answer files
        #[arg(long)]
        sessions: PathBuf,
        /// Store for the full-source context link
        #[arg(long)]
        store: Option<PathBuf>,
        /// Built browser tool to serve at /
        #[arg(long, value_name = "DIR")]
        static_dir: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}
