use std::path::PathBuf;

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sensespace::annotator::DEFAULT_DELTA;
use sensespace::eval::{SimilarityStrategy, DEFAULT_GAMMA};
use sensespace::model::LayerMode;

#[derive(Debug, Parser)]
#[command(
    name = "sensespace",
    version,
    about = "Annotate a corpus with senses, train joint word and sense embeddings, evaluate them",
    args_override_self = true,
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flag shared by every subcommand; read before argument parsing proper.
#[derive(Debug, Args)]
pub struct ConfigArg {
    /// key=value file supplying defaults for this command's flags
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Attach senses to every text unit (one per line) of a raw corpus
    Annotate(AnnotateArgs),
    /// Token count and average polysemy of a raw corpus
    Stats(StatsArgs),
    /// Train word and sense embeddings on an annotated corpus
    Train(TrainArgs),
    /// Word similarity correlation against a scored pair dataset
    EvalSim(EvalSimArgs),
    /// Sense clustering with a fixed cosine threshold
    EvalCluster(EvalClusterArgs),
    /// Pick the clustering threshold on a development set
    TuneGamma(TuneGammaArgs),
    /// Most-common-sense disambiguation
    EvalMcs(EvalMcsArgs),
    /// Nearest neighbors of a word or sense
    Nn(NnArgs),
}

#[derive(Debug, Args)]
pub struct NetworkArgs {
    /// Semantic network edge list (two synset ids per line, tab separated)
    #[arg(long, value_name = "FILE")]
    pub edges: PathBuf,
    /// Lexicon: form<TAB>id1,id2,...
    #[arg(long, value_name = "FILE")]
    pub lexicon: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnnotateArgs {
    /// Raw corpus, one text unit per line
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub network: NetworkArgs,
    /// Connectivity threshold divisor; larger values attach more senses
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    /// Annotated corpus to write
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Also write corpus statistics (key=value) here
    #[arg(long, value_name = "FILE")]
    pub stats: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Raw corpus, one text unit per line
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub network: NetworkArgs,
    /// Write the statistics here instead of standard output
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArg,
}

fn layer_mode() -> impl TypedValueParser<Value = LayerMode> {
    PossibleValuesParser::new(["words", "senses", "both"]).map(|s| s.parse::<LayerMode>().expect("listed value"))
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Annotated corpus (form|id1,id2 tokens)
    #[arg(long, value_name = "FILE")]
    pub annotated: PathBuf,
    #[arg(long, value_parser = layer_mode(), default_value = "senses")]
    pub input_mode: LayerMode,
    #[arg(long, value_parser = layer_mode(), default_value = "both")]
    pub output_mode: LayerMode,
    #[arg(long, default_value_t = 300)]
    pub dim: usize,
    /// Context positions on each side of the target
    #[arg(long, default_value_t = 8)]
    pub window: usize,
    #[arg(long, default_value_t = 5)]
    pub epochs: usize,
    /// Drop words and senses seen fewer times than this
    #[arg(long, default_value_t = 5)]
    pub min_count: u64,
    /// Initial learning rate
    #[arg(long, default_value_t = 0.025)]
    pub lr: f64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Seed for initialization and sampling (required with --deterministic)
    #[arg(long)]
    pub seed: Option<u64>,
    /// One worker and a fixed window, for bit-reproducible runs
    #[arg(long)]
    pub deterministic: bool,
    /// Frequent-word subsampling threshold (off by default)
    #[arg(long, value_name = "T")]
    pub subsample: Option<f64>,
    /// Embedding file to write (words, then senses as s#<id>)
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct ReportArg {
    /// Also write the key=value report here
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Strategy {
    ClosestSense,
    Word,
}

impl From<Strategy> for SimilarityStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::ClosestSense => SimilarityStrategy::ClosestSense,
            Strategy::Word => SimilarityStrategy::Word,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalSimArgs {
    /// Embedding file
    #[arg(long, value_name = "FILE")]
    pub vectors: PathBuf,
    /// Lexicon giving each word's candidate senses
    #[arg(long, value_name = "FILE")]
    pub lexicon: PathBuf,
    /// word1<TAB>word2<TAB>score
    #[arg(long, value_name = "FILE")]
    pub dataset: PathBuf,
    #[arg(long, value_enum, default_value_t = Strategy::ClosestSense)]
    pub strategy: Strategy,
    #[command(flatten)]
    pub report: ReportArg,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct EvalClusterArgs {
    #[arg(long, value_name = "FILE")]
    pub vectors: PathBuf,
    /// synset1<TAB>synset2<TAB>{0|1}
    #[arg(long, value_name = "FILE")]
    pub dataset: PathBuf,
    /// Merge two senses when their cosine exceeds this
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    pub gamma: f64,
    #[command(flatten)]
    pub report: ReportArg,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct TuneGammaArgs {
    #[arg(long, value_name = "FILE")]
    pub vectors: PathBuf,
    /// Development pairs: synset1<TAB>synset2<TAB>{0|1}
    #[arg(long, value_name = "FILE")]
    pub dev: PathBuf,
    #[command(flatten)]
    pub report: ReportArg,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct EvalMcsArgs {
    #[arg(long, value_name = "FILE")]
    pub vectors: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub lexicon: PathBuf,
    /// instance<TAB>lemma<TAB>gold1,gold2,...
    #[arg(long, value_name = "FILE")]
    pub dataset: PathBuf,
    #[command(flatten)]
    pub report: ReportArg,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct NnArgs {
    #[arg(long, value_name = "FILE")]
    pub vectors: PathBuf,
    /// Row label to query (a word, or s#<id> for a sense)
    #[arg(long)]
    pub label: String,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[command(flatten)]
    pub config: ConfigArg,
}
