use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use colorcount::count::DEFAULT_WORK_LIMIT;
use colorcount::regular::DEFAULT_MAX_ATTEMPTS;

#[derive(Debug, Parser)]
#[command(name = "colorcount", version, about = "Exact and randomized coloring counts on small graphs")]
pub struct Cli {
    /// TOML file of `key = value` defaults for the subcommand's flags.
    /// Flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count colorings, H-colorings, partial or good colorings, completions,
    /// or independent sets of one graph.
    Count(CountArgs),
    /// Check the exact inequalities over a corpus of small graphs.
    VerifyCorpus(VerifyArgs),
    /// Coupon-collector statistics for one list configuration.
    Coupon(CouponArgs),
    /// Monte Carlo colorings of random regular multigraphs.
    RandomRegular(RegularArgs),
    /// Evaluate every closed-form bound at one parameter point.
    Bounds(BoundsArgs),
    /// Implied error term: the smallest δ consistent with exact counts.
    Sweep(SweepArgs),
    /// Validate JSON and CSV outputs against their schemas.
    SchemaCheck(SchemaArgs),
}

impl Command {
    pub const NAMES: [&'static str; 7] =
        ["count", "verify-corpus", "coupon", "random-regular", "bounds", "sweep", "schema-check"];
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// Edge-list or graph6 file (graph6 when the extension is `.g6` or the
    /// file starts with `>>graph6<<`).
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    /// Named family, e.g. `cycle:5`, `kbip:2,3`, `petersen`.
    #[arg(long, value_name = "SPEC")]
    pub named: Option<String>,
    /// Inline graph6 string.
    #[arg(long, value_name = "STRING")]
    pub graph6: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountObject {
    Colorings,
    HColorings,
    Partial,
    Good,
    Completions,
    IndependentSets,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct CountArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, default_value_t = 3)]
    pub q: usize,
    #[arg(long, value_enum, default_value_t = CountObject::Colorings)]
    pub object: CountObject,
    /// Cover JSON; defaults to the canonical cover.
    #[arg(long, value_name = "PATH")]
    pub cover: Option<PathBuf>,
    /// Use a uniformly random cover drawn with this seed.
    #[arg(long, conflicts_with = "cover")]
    pub cover_seed: Option<u64>,
    /// Vertex set U for partial and good counts (comma-separated); all
    /// vertices when omitted.
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, num_args = 0..)]
    pub u: Option<Vec<usize>>,
    /// Small-list threshold for good colorings; derived from Δ and q by default.
    #[arg(long)]
    pub ell: Option<f64>,
    /// Degree threshold for good colorings; derived from Δ and q by default.
    #[arg(long)]
    pub d: Option<f64>,
    /// Partial coloring JSON (`{"vertex": index-or-null}`) to complete.
    #[arg(long, value_name = "PATH")]
    pub partial: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_WORK_LIMIT)]
    pub work_limit: u64,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusFilter {
    TriangleFree,
    Bipartite,
    All,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,
    #[arg(long, default_value_t = 2)]
    pub q_min: usize,
    #[arg(long, default_value_t = 4)]
    pub q_max: usize,
    #[arg(long, value_enum, default_value_t = CorpusFilter::TriangleFree)]
    pub filter: CorpusFilter,
    /// Extra named graphs to run through the precondition filter.
    #[arg(long, value_name = "SPEC", action = ArgAction::Set, value_delimiter = ';', num_args = 0..)]
    pub include: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_WORK_LIMIT)]
    pub work_limit: u64,
    /// JSON-lines output; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct CouponArgs {
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Degree used for the thresholds ℓ and d; defaults to k.
    #[arg(long)]
    pub delta: Option<usize>,
    /// Instance JSON; a random instance drawn from `seed` when omitted.
    #[arg(long, value_name = "PATH")]
    pub instance: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct RegularArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub delta: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_WORK_LIMIT)]
    pub work_limit: u64,
    /// Also write one simple triangle-free sample as an edge list.
    #[arg(long, value_name = "PATH")]
    pub sample_graph: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: u64,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct BoundsArgs {
    #[arg(long)]
    pub delta: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long)]
    pub n: usize,
    /// Edge count; `⌊Δn/2⌋` when omitted.
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of blank vertices for the completion bound; defaults to n.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct SweepArgs {
    /// Named graphs (semicolon-separated).
    #[arg(long, value_name = "SPEC", action = ArgAction::Set, value_delimiter = ';', num_args = 0..,
          default_value = "petersen")]
    pub named: Vec<String>,
    /// Also sweep the triangle-free corpus up to this many vertices.
    #[arg(long)]
    pub corpus_n_max: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub q_min: usize,
    #[arg(long, default_value_t = 20)]
    pub q_max: usize,
    #[arg(long, default_value_t = DEFAULT_WORK_LIMIT)]
    pub work_limit: u64,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct SchemaArgs {
    /// Files written by the other subcommands.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}
