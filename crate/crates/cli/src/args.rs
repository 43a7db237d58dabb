use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use vsnopt_core::model::{Area, EnergyParams, Nanojoules};
use vsnopt_core::scenario::{GenerationConfig, Preset};

#[derive(Debug, Parser)]
#[command(
    name = "vsnopt",
    version,
    about = "Energy-optimal sensing task assignment for node-virtualized sensor networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random scenario file.
    Generate(GenerateArgs),
    /// Solve a scenario to optimality and write the plan.
    Solve(SolveArgs),
    /// Solve the one-task-per-physical-node baseline.
    Baseline(BaselineArgs),
    /// Check a plan against every constraint of its scenario.
    Validate(ValidateArgs),
    /// Compare the optimal plan with the baseline on one scenario.
    Compare(CompareArgs),
    /// Compare over many generated scenarios.
    Sweep(SweepArgs),
    /// Draw a scenario (and optionally a plan) as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Number of sensor nodes.
    #[arg(long = "nodes", value_name = "N")]
    pub n_nodes: Option<usize>,
    /// Number of sensing tasks.
    #[arg(long = "tasks", value_name = "N")]
    pub n_tasks: Option<usize>,
    /// Area in meters.
    #[arg(long, value_name = "WxH", value_parser = parse_area)]
    pub area: Option<Area>,
    /// Sensing range in meters.
    #[arg(long, value_name = "M")]
    pub range: Option<f64>,
    /// Energy of one active node, in nanojoules.
    #[arg(long = "eps-nj", value_name = "N")]
    pub e_ps: Option<u64>,
    /// Overhead per virtual sensor, in nanojoules.
    #[arg(long = "evs-nj", value_name = "N")]
    pub e_vs: Option<u64>,
    /// Virtual sensors per node.
    #[arg(long = "max-vs", value_name = "N")]
    pub max_vs: Option<u32>,
    /// Closed interval node budgets are drawn from, in nanojoules.
    #[arg(long = "budget-nj", value_name = "LO..HI", value_parser = parse_budget)]
    pub budget: Option<(u64, u64)>,
    /// Keep task positions that no node covers.
    #[arg(long)]
    pub allow_uncovered: bool,
}

impl Overrides {
    pub fn apply(&self, mut config: GenerationConfig) -> GenerationConfig {
        if let Some(n) = self.n_nodes {
            config.n_nodes = n;
        }
        if let Some(n) = self.n_tasks {
            config.n_tasks = n;
        }
        if let Some(a) = self.area {
            config.area = a;
        }
        if let Some(r) = self.range {
            config.range = r;
        }
        let EnergyParams {
            mut e_ps,
            mut e_vs,
            mut max_vs,
        } = config.params;
        if let Some(v) = self.e_ps {
            e_ps = Nanojoules(v);
        }
        if let Some(v) = self.e_vs {
            e_vs = Nanojoules(v);
        }
        if let Some(v) = self.max_vs {
            max_vs = v;
        }
        config.params = EnergyParams { e_ps, e_vs, max_vs };
        if let Some((lo, hi)) = self.budget {
            config.budget_interval = (Nanojoules(lo), Nanojoules(hi));
        }
        if self.allow_uncovered {
            config.require_coverage = false;
        }
        config
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Base settings (defaults to s1).
    #[arg(long, value_parser = parse_preset)]
    pub preset: Option<Preset>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Output scenario file.
    #[arg(short = 'o', value_name = "PATH")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub scenario: PathBuf,
    /// Output plan file.
    #[arg(short = 'o', value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Use exhaustive enumeration (size cap from VSNOPT_BRUTE_CAP, default 8 tasks).
    #[arg(long)]
    pub brute_force: bool,
    /// Bound undecided nodes without the amortized hosting charge.
    #[arg(long)]
    pub plain_bound: bool,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    pub scenario: PathBuf,
    #[arg(short = 'o', value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub scenario: PathBuf,
    pub plan: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub scenario: PathBuf,
    /// Write the comparison record as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Scenario families to sweep; repeatable (defaults to s1, s2 and s3).
    #[arg(long, value_parser = parse_preset)]
    pub preset: Vec<Preset>,
    /// Seeds as A..B (exclusive), A..=B (inclusive) or a single N.
    #[arg(long, value_name = "A..B", value_parser = parse_seeds, default_value = "0..100")]
    pub seeds: SeedRange,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Write one CSV row per (family, seed).
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Write the summary table to a file instead of stdout.
    #[arg(short = 'o', value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    pub scenario: PathBuf,
    /// Plan to draw; without it only nodes and tasks are shown.
    pub plan: Option<PathBuf>,
    #[arg(short = 'o', value_name = "PATH")]
    pub output: PathBuf,
    #[arg(long)]
    pub no_range_circles: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedRange {
    pub start: u64,
    /// Exclusive.
    pub end: u64,
}

impl SeedRange {
    pub fn seeds(&self) -> Vec<u64> {
        (self.start..self.end).collect()
    }
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse()
}

pub fn parse_area(s: &str) -> Result<Area, String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got '{s}'"))?;
    let num = |v: &str| -> Result<f64, String> {
        let x: f64 = v
            .trim()
            .parse()
            .map_err(|_| format!("'{v}' is not a number"))?;
        if x.is_finite() && x > 0.0 {
            Ok(x)
        } else {
            Err(format!("area side must be positive, got {v}"))
        }
    };
    Ok(Area::new(num(w)?, num(h)?))
}

pub fn parse_budget(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got '{s}'"))?;
    let lo: u64 = lo
        .parse()
        .map_err(|_| format!("'{lo}' is not an integer"))?;
    let hi: u64 = hi
        .parse()
        .map_err(|_| format!("'{hi}' is not an integer"))?;
    if lo > hi {
        return Err(format!("empty budget interval {lo}..{hi}"));
    }
    Ok((lo, hi))
}

pub fn parse_seeds(s: &str) -> Result<SeedRange, String> {
    let int =
        |v: &str| -> Result<u64, String> { v.parse().map_err(|_| format!("'{v}' is not a seed")) };
    let range = if let Some((a, b)) = s.split_once("..=") {
        let end = int(b)?
            .checked_add(1)
            .ok_or_else(|| "seed range too large".to_string())?;
        SeedRange {
            start: int(a)?,
            end,
        }
    } else if let Some((a, b)) = s.split_once("..") {
        SeedRange {
            start: int(a)?,
            end: int(b)?,
        }
    } else {
        let n = int(s)?;
        SeedRange {
            start: n,
            end: n + 1,
        }
    };
    if range.start >= range.end {
        return Err(format!("seed range '{s}' is empty"));
    }
    Ok(range)
}
