use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use harmony_core::families::Family;

#[derive(Parser)]
#[command(
    name = "harmony",
    version,
    about = "Γ-harmonious labelings of cycle-related graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for search and survey.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Write the run report here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build a labeling from a witness subgroup.
    Construct(ConstructArgs),
    /// Check a labeling file.
    Verify(VerifyArgs),
    /// Exhaustive search for a labeling.
    Search(SearchArgs),
    /// Construction vs. search over parameter ranges, as CSV.
    Survey(SurveyArgs),
    /// Render a labeling file as Graphviz DOT.
    Export(ExportArgs),
    /// Print a harmonious sequence of a group.
    GroupSeq(GroupSeqArgs),
}

#[derive(Args, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
}

#[derive(Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Moduli as `5,3` or `Z5+Z3`.
    #[arg(long)]
    pub group: String,
    /// Generators of H, `;`-separated, each a comma-separated coordinate list.
    #[arg(long)]
    pub subgroup: Option<String>,
    /// Labeling JSON output; without it the labeling is inlined in the report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Args)]
pub struct SearchArgs {
    #[arg(long, value_parser = parse_family, conflicts_with = "edges")]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    /// Graph JSON file (a bare `{"edges": [[a,b], …]}` is accepted).
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long, required_unless_present = "all_groups")]
    pub group: Option<String>,
    /// Every Abelian group of order |E|, up to isomorphism.
    #[arg(long, conflicts_with = "group")]
    pub all_groups: bool,
    /// Count all labelings.
    #[arg(long)]
    pub count: bool,
    /// Single-threaded, lex-first solution.
    #[arg(long)]
    pub deterministic: bool,
    /// Do not pin the first vertex to the identity.
    #[arg(long)]
    pub no_symmetry: bool,
    #[arg(long, default_value_t = 1_000_000_000)]
    pub node_budget: u64,
    /// Seconds.
    #[arg(long, default_value_t = 300)]
    pub time_budget: u64,
    /// Write the found labeling here (single group only).
    #[arg(long, conflicts_with = "all_groups")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SurveyArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Inclusive range `a..b`, a list `a,b,c`, or a single value.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    /// Only cyclic groups.
    #[arg(long)]
    pub cyclic_only: bool,
    /// Largest group order that is searched exhaustively.
    #[arg(long, default_value_t = 16)]
    pub search_cap: u64,
    /// Largest group order included at all.
    #[arg(long, default_value_t = 300)]
    pub order_cap: u64,
    #[arg(long, default_value_t = 1_000_000_000)]
    pub node_budget: u64,
    /// Seconds per search cell.
    #[arg(long, default_value_t = 300)]
    pub time_budget: u64,
    #[arg(long)]
    pub deterministic: bool,
    #[arg(long, default_value = "survey.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ExportArgs {
    /// Labeling JSON to render.
    #[arg(long, value_name = "LABELING")]
    pub dot: PathBuf,
    /// DOT output; defaults to the input path with a `.dot` extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct GroupSeqArgs {
    pub group: String,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

/// `3..8` (inclusive), `3,5,7`, or `4`.
pub fn parse_range(s: &str) -> Result<Vec<u64>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("`{t}` is not a number"))
    };
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty range {s}"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(num).collect()
}
