use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use commdeg_core::audit::{AuditConfig, GPolicy};
use commdeg_core::comm::Predicate;

#[derive(Debug, Parser)]
#[command(name = "commdeg", version, about = "Exact generalized commutativity degrees of finite groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(short = 'o', long, global = true, value_enum)]
    pub output: Option<Output>,

    /// Seed for the character-table construction.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Largest group order accepted when closing generators.
    #[arg(long, global = true, env = "COMMDEG_MAX_ORDER")]
    pub max_order: Option<usize>,

    /// Largest number of tuples enumerated by brute force.
    #[arg(long, global = true)]
    pub brute_cap: Option<u128>,

    /// JSON file whose keys mirror the flags; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Auto,
    Brute,
    Class,
    Dist,
    Char,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredicateArg {
    Derived,
    Paper,
}

impl From<PredicateArg> for Predicate {
    fn from(p: PredicateArg) -> Self {
        match p {
            PredicateArg::Derived => Predicate::Derived,
            PredicateArg::Paper => Predicate::Paper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GPolicyArg {
    Support,
    All,
}

impl From<GPolicyArg> for GPolicy {
    fn from(p: GPolicyArg) -> Self {
        match p {
            GPolicyArg::Support => GPolicy::Support,
            GPolicyArg::All => GPolicy::All,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order, classes, center and the id → permutation table.
    Info(GroupArg),
    /// p_g^(n,m)(H,K) for one g, or every g with `-g all`.
    Prob(ProbArgs),
    /// p_g^(n,m)(H,K) for every g.
    Profile(ProbArgs),
    /// ζ^(n,m)(g): solutions in Hⁿ × Gᵐ.
    Zeta(ZetaArgs),
    /// Raw commutator-value counts over Hⁿ × Kᵐ.
    Dist(Weighted),
    /// Complex character table.
    Chartab(ChartabArgs),
    /// Run the claim audit.
    Audit(AuditArgs),
}

#[derive(Debug, Args)]
pub struct GroupArg {
    /// Group spec: S4, D5, Q8, C2xC4, or `perm(4): (1 2 3 4); (1 2)`.
    #[arg(short = 'G', long = "group")]
    pub group: Option<String>,
}

#[derive(Debug, Args)]
pub struct Weighted {
    #[command(flatten)]
    pub group: GroupArg,

    /// Subgroup for the x-block: triv, full, center or gen[ids].
    #[arg(short = 'H', long = "h-sub")]
    pub h: Option<String>,

    /// Subgroup for the y-block.
    #[arg(short = 'K', long = "k-sub")]
    pub k: Option<String>,

    #[arg(short = 'n', value_parser = clap::value_parser!(u32).range(1..))]
    pub n: Option<u32>,

    #[arg(short = 'm', value_parser = clap::value_parser!(u32).range(1..))]
    pub m: Option<u32>,
}

#[derive(Debug, Args)]
pub struct ProbArgs {
    #[command(flatten)]
    pub weighted: Weighted,

    /// Target element id, or `all`.
    #[arg(short = 'g')]
    pub g: Option<String>,

    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,

    /// Solvability test used by the class formula.
    #[arg(long, value_enum)]
    pub predicate: Option<PredicateArg>,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[command(flatten)]
    pub group: GroupArg,

    #[arg(short = 'H', long = "h-sub")]
    pub h: Option<String>,

    #[arg(short = 'n', value_parser = clap::value_parser!(u32).range(1..))]
    pub n: Option<u32>,

    #[arg(short = 'm', value_parser = clap::value_parser!(u32).range(1..))]
    pub m: Option<u32>,

    /// Target element id, or `all`.
    #[arg(short = 'g')]
    pub g: Option<String>,
}

#[derive(Debug, Args)]
pub struct ChartabArgs {
    #[command(flatten)]
    pub group: GroupArg,

    /// Validate a table in the JSON export format against the group and
    /// print it back.
    #[arg(long)]
    pub import: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Named battery: default or small.
    #[arg(long)]
    pub battery: Option<String>,

    /// Comma-separated group specs replacing the battery's list.
    #[arg(long)]
    pub groups: Option<String>,

    /// Comma-separated claim tags; all claims when absent.
    #[arg(long)]
    pub claims: Option<String>,

    #[arg(long, value_enum)]
    pub g_policy: Option<GPolicyArg>,

    /// Comma-separated n values.
    #[arg(long)]
    pub n_values: Option<String>,

    /// Comma-separated m values.
    #[arg(long)]
    pub m_values: Option<String>,

    /// Record per-finding runtimes (makes output time-dependent).
    #[arg(long)]
    pub timing: bool,
}

/// Optional JSON defaults; every key mirrors a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub group: Option<String>,
    pub h: Option<String>,
    pub k: Option<String>,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub g: Option<serde_json::Value>,
    pub method: Option<MethodArg>,
    pub predicate: Option<PredicateArg>,
    pub output: Option<Output>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub max_order: Option<usize>,
    pub brute_cap: Option<u128>,
    pub import: Option<PathBuf>,
    pub battery: Option<String>,
    pub claims: Option<Vec<String>>,
    pub g_policy: Option<GPolicyArg>,
    pub audit: Option<AuditConfig>,
}
