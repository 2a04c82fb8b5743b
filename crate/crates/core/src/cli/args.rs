use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::rng::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(
    name = "hedonic",
    version,
    about = "Dictionary-based sentiment analysis and emotional arc mining"
)]
pub struct Cli {
    /// Seed for every random substream.
    #[arg(long, global = true, env = "HEDONIC_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads for document-level parallelism (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// File of `key=value` lines, each read as `--key value` before the
    /// command-line flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Average happiness of each input text or word-vector CSV.
    Score(ScoreArgs),
    /// Word shift between a reference and a comparison text.
    Shift(ShiftArgs),
    /// Compare the scores two lexicons give their shared words.
    Compare(CompareArgs),
    /// Benchmark a lexicon on a labeled corpus.
    Bench(BenchArgs),
    /// Build emotional arcs from long texts.
    Arcs(ArcsArgs),
    /// SVD mode analysis of an arc matrix.
    Svd(SvdArgs),
    /// Ward clustering of arcs.
    Cluster(ClusterArgs),
    /// Train a self-organizing map on arcs.
    Som(SomArgs),
    /// Write word-salad or bigram-nonsense versions of texts.
    Null(NullArgs),
    /// Filter a catalog by length, downloads and title.
    #[command(name = "corpus-filter")]
    CorpusFilter(CorpusFilterArgs),
}

impl Command {
    pub const NAMES: [&'static str; 10] = [
        "score",
        "shift",
        "compare",
        "bench",
        "arcs",
        "svd",
        "cluster",
        "som",
        "null",
        "corpus-filter",
    ];
}

#[derive(Debug, Clone, Args)]
pub struct LexiconArgs {
    /// Lexicon file (`#lexicon` header, then `surface<TAB>score` lines).
    #[arg(long)]
    pub lexicon: PathBuf,

    /// Score range `lo,hi` for lexicon files without a header.
    #[arg(long, value_parser = parse_range)]
    pub range: Option<(f64, f64)>,

    /// Neutral score for headerless files (default: middle of the range).
    #[arg(long)]
    pub center: Option<f64>,

    /// Drop entries within this distance of the neutral score.
    #[arg(long, default_value_t = 0.0)]
    pub delta_h: f64,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected `lo,hi`")?;
    let p = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{v}` is not a number"))
    };
    Ok((p(lo)?, p(hi)?))
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub lexicon: LexiconArgs,

    /// Texts, or `.csv` word vectors with a `word,count` header.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,

    /// Report undefined scores as null instead of failing.
    #[arg(long)]
    pub allow_unscored: bool,

    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ShiftArgs {
    #[command(flatten)]
    pub lexicon: LexiconArgs,

    #[arg(long)]
    pub reference: PathBuf,

    #[arg(long)]
    pub comparison: PathBuf,

    /// Words to remove from both texts before shifting.
    #[arg(long, value_delimiter = ',')]
    pub mask: Vec<String>,

    /// Keep only the k largest contributions.
    #[arg(long)]
    pub top: Option<usize>,

    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct CompareArgs {
    #[arg(long)]
    pub lexicon_a: PathBuf,

    #[arg(long)]
    pub lexicon_b: PathBuf,

    /// Mismatches to list (per bucket when no line is fitted).
    #[arg(long, default_value_t = 10)]
    pub top: usize,

    /// Per-word comparison CSV.
    #[arg(long)]
    pub pairs: Option<PathBuf>,

    /// Summary JSON (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ThresholdChoice {
    Mean,
    Center,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct BenchArgs {
    #[command(flatten)]
    pub lexicon: LexiconArgs,

    /// `pos/` and `neg/` directories of `.txt` files, or an `id,label,text` CSV.
    #[arg(long)]
    pub corpus: PathBuf,

    /// Fixed decision threshold; overrides `--threshold-rule`.
    #[arg(long)]
    pub threshold: Option<f64>,

    #[arg(long, value_enum, default_value_t = ThresholdChoice::Mean)]
    pub threshold_rule: ThresholdChoice,

    /// Share of documents used to calibrate the threshold and train Naive Bayes.
    #[arg(long, default_value_t = 0.1)]
    pub train_fraction: f64,

    /// Concatenation sample sizes as `lo,hi,count` (log spaced).
    #[arg(long)]
    pub sizes: Option<String>,

    #[arg(long, default_value_t = 100)]
    pub trials: usize,

    #[arg(long, default_value_t = 5000)]
    pub nb_vocab: usize,

    #[arg(long, default_value_t = 0)]
    pub nb_drop_top: usize,

    /// Most informative Naive Bayes words to list.
    #[arg(long, default_value_t = 10)]
    pub informative: usize,

    /// Split documents into sentences before scoring.
    #[arg(long)]
    pub sentences: bool,

    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TextSource {
    /// Text files; ids are the file stems.
    pub inputs: Vec<PathBuf>,

    /// Catalog CSV (`id,title,downloads,path`) instead of positional files.
    #[arg(long)]
    pub catalog: Option<PathBuf>,

    /// Base for relative catalog paths (default: the catalog's directory).
    #[arg(long)]
    pub base: Option<PathBuf>,

    /// Remove Project Gutenberg front and back matter.
    #[arg(long)]
    pub strip: bool,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ArcsArgs {
    #[command(flatten)]
    pub lexicon: LexiconArgs,

    #[command(flatten)]
    pub source: TextSource,

    #[arg(long, default_value_t = crate::arcs::DEFAULT_POINTS)]
    pub n_points: usize,

    #[arg(long, default_value_t = crate::arcs::DEFAULT_WINDOW)]
    pub window: usize,

    /// Keep raw window scores instead of mean-centering.
    #[arg(long)]
    pub no_center: bool,

    /// Batch CSV of all arcs.
    #[arg(long, short)]
    pub output: PathBuf,

    /// Also write one JSON file per arc here.
    #[arg(long)]
    pub json_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SvdArgs {
    /// Batch arc CSV.
    #[arg(long)]
    pub arcs: PathBuf,

    /// Modes to keep (default: all).
    #[arg(long)]
    pub modes: Option<usize>,

    /// Stories listed per mode and polarity.
    #[arg(long, default_value_t = 5)]
    pub closest: usize,

    /// CSV with an `id` column and a numeric metadata column.
    #[arg(long)]
    pub metadata: Option<PathBuf>,

    #[arg(long, default_value = "downloads")]
    pub metadata_column: String,

    /// Report only modes holding more than this share of the arcs.
    #[arg(long, default_value_t = 0.025)]
    pub threshold: f64,

    /// Coefficient matrix CSV.
    #[arg(long)]
    pub coefficients: Option<PathBuf>,

    /// Closest stories and metadata groups as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,

    /// Decomposition JSON (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ClusterArgs {
    #[arg(long)]
    pub arcs: PathBuf,

    /// Clusters to cut the tree into.
    #[arg(long, short, default_value_t = 2)]
    pub k: usize,

    /// Linkage JSON.
    #[arg(long)]
    pub dendrogram: Option<PathBuf>,

    /// Per-document cluster CSV.
    #[arg(long)]
    pub assignments: Option<PathBuf>,

    /// Cluster report CSV (cluster, size, central book); default stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SomArgs {
    #[arg(long)]
    pub arcs: PathBuf,

    #[arg(long, default_value_t = crate::som::DEFAULT_SIDE)]
    pub side: usize,

    #[arg(long, default_value_t = crate::som::DEFAULT_ALPHA, allow_hyphen_values = true)]
    pub alpha: f64,

    #[arg(long, default_value_t = crate::som::DEFAULT_BETA, allow_hyphen_values = true)]
    pub beta: f64,

    /// Training draws (default: ten per arc).
    #[arg(long)]
    pub iterations: Option<usize>,

    /// Grid JSON (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NullKind {
    Salad,
    Nonsense,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct NullArgs {
    #[arg(long, value_enum)]
    pub kind: NullKind,

    #[command(flatten)]
    pub source: TextSource,

    /// Directory for the generated texts and their catalog.
    #[arg(long)]
    pub output_dir: PathBuf,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct CorpusFilterArgs {
    #[arg(long)]
    pub catalog: PathBuf,

    #[arg(long)]
    pub base: Option<PathBuf>,

    #[arg(long, default_value_t = 20_000)]
    pub min_words: usize,

    #[arg(long, default_value_t = 100_000)]
    pub max_words: usize,

    /// Keep books with strictly more downloads than this.
    #[arg(long, default_value_t = 40)]
    pub min_downloads: i64,

    /// Title words that exclude a book (default: a list of non-fiction markers).
    #[arg(long, value_delimiter = ',')]
    pub blocklist: Option<Vec<String>>,

    /// Count words without removing Gutenberg boilerplate.
    #[arg(long)]
    pub no_strip: bool,

    /// Write stripped texts here and point the output catalog at them.
    #[arg(long)]
    pub stripped_dir: Option<PathBuf>,

    /// Filtered catalog CSV.
    #[arg(long, short)]
    pub output: PathBuf,
}
