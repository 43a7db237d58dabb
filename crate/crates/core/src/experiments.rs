//! Virtualized-vs-traditional comparisons and multi-seed sweeps.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io;

use rayon::prelude::*;

use crate::error::ExperimentError;
use crate::model::{AssignmentPlan, Mode, Nanojoules, Scenario};
use crate::scenario::{generate, scenario_fingerprint, GenerationConfig, Preset};
use crate::solver::{solve_exact, solve_traditional, SolveResult};

/// Outcome of solving one scenario both ways.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRecord {
    pub scenario_id: String,
    pub seed: Option<u64>,
    /// `None` when the virtualized problem is infeasible.
    pub virt_cost: Option<Nanojoules>,
    /// `None` when no one-task-per-node assignment exists.
    pub trad_cost: Option<Nanojoules>,
    pub nodes_virtualized: usize,
    pub nodes_physical_mode: usize,
    pub nodes_used_virt: usize,
    pub nodes_used_trad: Option<usize>,
    pub savings_fraction: Option<f64>,
    pub node_ratio: Option<f64>,
    /// Set when the scenario could not be generated; all other metrics are empty.
    pub generation_error: Option<String>,
}

impl ComparisonRecord {
    /// The plan uses both virtualized and physical-mode nodes.
    pub fn is_mixed(&self) -> bool {
        self.nodes_virtualized > 0 && self.nodes_physical_mode > 0
    }

    fn failed(scenario_id: String, seed: u64, error: String) -> Self {
        ComparisonRecord {
            scenario_id,
            seed: Some(seed),
            virt_cost: None,
            trad_cost: None,
            nodes_virtualized: 0,
            nodes_physical_mode: 0,
            nodes_used_virt: 0,
            nodes_used_trad: None,
            savings_fraction: None,
            node_ratio: None,
            generation_error: Some(error),
        }
    }
}

/// (virtualized nodes, nodes running a PS task). Idle nodes count in neither.
pub fn count_nodes(plan: &AssignmentPlan) -> (usize, usize) {
    let physical: BTreeSet<_> = plan
        .assignments
        .iter()
        .filter(|a| a.mode == Mode::Ps && !plan.is_virtualized(a.node))
        .map(|a| a.node)
        .collect();
    (plan.virtualized.len(), physical.len())
}

/// Compares the optimal virtualized plan with the traditional baseline.
/// The record id is the scenario fingerprint.
pub fn compare(scenario: &Scenario) -> ComparisonRecord {
    compare_labeled(&scenario_fingerprint(scenario), scenario)
}

pub fn compare_labeled(scenario_id: &str, scenario: &Scenario) -> ComparisonRecord {
    let virt = solve_exact(scenario);
    let trad = solve_traditional(scenario);
    record_from(scenario_id, scenario, &virt, &trad)
}

fn record_from(
    scenario_id: &str,
    scenario: &Scenario,
    virt: &SolveResult,
    trad: &SolveResult,
) -> ComparisonRecord {
    let (nodes_virtualized, nodes_physical_mode) =
        virt.plan.as_ref().map(count_nodes).unwrap_or((0, 0));
    let nodes_used_virt = nodes_virtualized + nodes_physical_mode;
    let nodes_used_trad = trad.plan.as_ref().map(|p| {
        let (_, physical) = count_nodes(p);
        physical
    });
    let virt_cost = virt.total();
    let trad_cost = trad.total();

    let savings_fraction = match (virt_cost, trad_cost) {
        (Some(v), Some(t)) if t.0 > 0 => Some((t.0 as f64 - v.0 as f64) / t.0 as f64),
        _ => None,
    };
    let node_ratio = match nodes_used_trad {
        Some(t) if t > 0 && nodes_used_virt > 0 && virt_cost.is_some() => {
            Some(t as f64 / nodes_used_virt as f64)
        }
        _ => None,
    };
    ComparisonRecord {
        scenario_id: scenario_id.to_string(),
        seed: scenario.seed,
        virt_cost,
        trad_cost,
        nodes_virtualized,
        nodes_physical_mode,
        nodes_used_virt,
        nodes_used_trad,
        savings_fraction,
        node_ratio,
        generation_error: None,
    }
}

/// A named generation template; the seed is replaced per sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepFamily {
    pub name: String,
    pub template: GenerationConfig,
}

impl SweepFamily {
    pub fn new(name: impl Into<String>, template: GenerationConfig) -> Self {
        SweepFamily {
            name: name.into(),
            template,
        }
    }

    pub fn preset(preset: Preset) -> Self {
        SweepFamily::new(preset.name(), preset.config(0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl Summary {
    fn of(values: impl Iterator<Item = f64>) -> Option<Summary> {
        let mut n = 0usize;
        let mut sum = 0.0;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            n += 1;
            sum += v;
            min = min.min(v);
            max = max.max(v);
        }
        (n > 0).then(|| Summary {
            min,
            mean: sum / n as f64,
            max,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyAggregate {
    pub family: String,
    pub runs: usize,
    pub savings: Option<Summary>,
    pub node_ratio: Option<Summary>,
    pub trad_infeasible: usize,
    pub virt_infeasible: usize,
    pub generation_failures: usize,
    pub mixed: usize,
}

impl FamilyAggregate {
    pub fn from_records<'a>(
        family: &str,
        records: impl IntoIterator<Item = &'a ComparisonRecord> + Clone,
    ) -> Self {
        let recs: Vec<&ComparisonRecord> = records.into_iter().collect();
        let generated = || recs.iter().filter(|r| r.generation_error.is_none());
        FamilyAggregate {
            family: family.to_string(),
            runs: recs.len(),
            savings: Summary::of(recs.iter().filter_map(|r| r.savings_fraction)),
            node_ratio: Summary::of(recs.iter().filter_map(|r| r.node_ratio)),
            trad_infeasible: generated().filter(|r| r.trad_cost.is_none()).count(),
            virt_infeasible: generated().filter(|r| r.virt_cost.is_none()).count(),
            generation_failures: recs.len() - generated().count(),
            mixed: recs.iter().filter(|r| r.is_mixed()).count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub families: Vec<SweepFamily>,
    pub seeds: Vec<u64>,
    /// Family-major, then in seed order.
    pub records: Vec<ComparisonRecord>,
    pub aggregates: Vec<FamilyAggregate>,
}

impl SweepReport {
    pub fn records_for<'a>(
        &'a self,
        family: &'a str,
    ) -> impl Iterator<Item = &'a ComparisonRecord> + Clone + 'a {
        self.records.iter().filter(move |r| r.scenario_id == family)
    }
}

/// Generates and compares one scenario per (family, seed). Cells run in
/// parallel; the report order does not depend on scheduling.
pub fn run_sweep(families: &[SweepFamily], seeds: &[u64]) -> Result<SweepReport, ExperimentError> {
    if seeds.is_empty() {
        return Err(ExperimentError::NoSeeds);
    }
    if families.is_empty() {
        return Err(ExperimentError::NoFamilies);
    }
    let cells: Vec<(&SweepFamily, u64)> = families
        .iter()
        .flat_map(|f| seeds.iter().map(move |&s| (f, s)))
        .collect();
    let records: Vec<ComparisonRecord> = cells
        .par_iter()
        .map(|&(family, seed)| {
            let config = GenerationConfig {
                seed,
                ..family.template.clone()
            };
            match generate(&config) {
                Ok(scenario) => compare_labeled(&family.name, &scenario),
                Err(e) => ComparisonRecord::failed(family.name.clone(), seed, e.to_string()),
            }
        })
        .collect();

    let aggregates = families
        .iter()
        .map(|f| {
            FamilyAggregate::from_records(
                &f.name,
                records.iter().filter(|r| r.scenario_id == f.name),
            )
        })
        .collect();
    Ok(SweepReport {
        families: families.to_vec(),
        seeds: seeds.to_vec(),
        records,
        aggregates,
    })
}

pub const CSV_HEADER: [&str; 12] = [
    "scenario_id",
    "seed",
    "virt_cost_nj",
    "trad_cost_nj",
    "nodes_virtualized",
    "nodes_physical_mode",
    "nodes_used_virt",
    "nodes_used_trad",
    "savings_fraction",
    "node_ratio",
    "mixed",
    "error",
];

/// One row per record. Infeasible costs are written as `infeasible`,
/// absent ratios as empty cells.
pub fn write_csv<W: io::Write>(
    records: &[ComparisonRecord],
    out: W,
) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    let cost = |c: Option<Nanojoules>, generated: bool| match (c, generated) {
        (Some(c), _) => c.0.to_string(),
        (None, true) => "infeasible".to_string(),
        (None, false) => String::new(),
    };
    for r in records {
        let generated = r.generation_error.is_none();
        w.write_record([
            r.scenario_id.clone(),
            opt(r.seed.map(|s| s.to_string())),
            cost(r.virt_cost, generated),
            cost(r.trad_cost, generated),
            r.nodes_virtualized.to_string(),
            r.nodes_physical_mode.to_string(),
            r.nodes_used_virt.to_string(),
            opt(r.nodes_used_trad.map(|n| n.to_string())),
            opt(r.savings_fraction.map(|f| f.to_string())),
            opt(r.node_ratio.map(|f| f.to_string())),
            r.is_mixed().to_string(),
            opt(r.generation_error.clone()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(records: &[ComparisonRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

/// Fixed-width text table, one line per family.
pub fn summary_table(aggregates: &[FamilyAggregate]) -> String {
    let pct = |s: Option<Summary>| match s {
        Some(s) => format!(
            "{:>6.1}% {:>6.1}% {:>6.1}%",
            100.0 * s.min,
            100.0 * s.mean,
            100.0 * s.max
        ),
        None => format!("{:>7} {:>7} {:>7}", "-", "-", "-"),
    };
    let ratio = |s: Option<Summary>| match s {
        Some(s) => format!("{:>5.2} {:>5.2} {:>5.2}", s.min, s.mean, s.max),
        None => format!("{:>5} {:>5} {:>5}", "-", "-", "-"),
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:>5} {:>6} {:>6} {:>6}  {:^23}  {:^17}",
        "family", "runs", "t-inf", "v-inf", "mixed", "savings min/mean/max", "ratio min/mean/max"
    );
    for a in aggregates {
        let _ = writeln!(
            out,
            "{:<10} {:>5} {:>6} {:>6} {:>6}  {}  {}",
            a.family,
            a.runs,
            a.trad_infeasible,
            a.virt_infeasible,
            a.mixed,
            pct(a.savings),
            ratio(a.node_ratio)
        );
    }
    out
}
