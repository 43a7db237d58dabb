//! Seeded scenario generation, coverage-matrix construction and the on-disk
//! scenario and plan formats.
//!
//! Draw order for a given seed is fixed: node positions (x then y, node by
//! node), then node budgets, then task positions. A task position that no
//! node covers is redrawn, up to [`COVERAGE_DRAWS`] draws per task, when
//! coverage is required.

mod file;

pub use file::{
    load_plan, load_scenario, plan_from_json, save_plan, save_scenario, scenario_fingerprint,
    scenario_from_json, scenario_to_json, write_atomic, PlanFile, PLAN_SCHEMA_VERSION,
    SCENARIO_SCHEMA_VERSION,
};

use std::fmt;
use std::str::FromStr;

use crate::error::ScenarioError;
use crate::model::{
    covers, Area, CoverageMatrix, EnergyParams, Nanojoules, Point, Scenario, SensingTask,
    SensorNode,
};
use crate::rng::SplitMix64;

/// Draws allowed per task before giving up on finding a covered position.
pub const COVERAGE_DRAWS: u32 = 1000;

pub const DEFAULT_RANGE_M: f64 = 30.0;
pub const DEFAULT_BUDGET_NJ: (u64, u64) = (1_900_000_000, 3_400_000_000);

/// The three evaluation settings: 10/15/20 nodes and 8/12/16 tasks over
/// 100, 150 and 200 meter square areas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    S1,
    S2,
    S3,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::S1, Preset::S2, Preset::S3];

    pub fn name(self) -> &'static str {
        match self {
            Preset::S1 => "s1",
            Preset::S2 => "s2",
            Preset::S3 => "s3",
        }
    }

    /// (side length in meters, nodes, tasks)
    pub fn dimensions(self) -> (f64, usize, usize) {
        match self {
            Preset::S1 => (100.0, 10, 8),
            Preset::S2 => (150.0, 15, 12),
            Preset::S3 => (200.0, 20, 16),
        }
    }

    pub fn config(self, seed: u64) -> GenerationConfig {
        let (side, n_nodes, n_tasks) = self.dimensions();
        GenerationConfig {
            area: Area::new(side, side),
            n_nodes,
            n_tasks,
            range: DEFAULT_RANGE_M,
            budget_interval: (
                Nanojoules(DEFAULT_BUDGET_NJ.0),
                Nanojoules(DEFAULT_BUDGET_NJ.1),
            ),
            params: EnergyParams::default(),
            seed,
            require_coverage: true,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(Preset::S1),
            "s2" => Ok(Preset::S2),
            "s3" => Ok(Preset::S3),
            other => Err(format!("unknown preset '{other}' (expected s1, s2 or s3)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationConfig {
    pub area: Area,
    pub n_nodes: usize,
    pub n_tasks: usize,
    pub range: f64,
    /// Closed interval budgets are drawn from.
    pub budget_interval: (Nanojoules, Nanojoules),
    pub params: EnergyParams,
    pub seed: u64,
    pub require_coverage: bool,
}

impl GenerationConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        area: Area,
        n_nodes: usize,
        n_tasks: usize,
        range: f64,
        budget_interval: (Nanojoules, Nanojoules),
        params: EnergyParams,
        seed: u64,
        require_coverage: bool,
    ) -> Result<Self, ScenarioError> {
        let config = GenerationConfig {
            area,
            n_nodes,
            n_tasks,
            range,
            budget_interval,
            params,
            seed,
            require_coverage,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |msg: String| Err(ScenarioError::InvalidConfig(msg));
        if self.n_nodes == 0 {
            return bad("n_nodes must be at least 1".into());
        }
        if self.n_tasks == 0 {
            return bad("n_tasks must be at least 1".into());
        }
        if self.budget_interval.0 > self.budget_interval.1 {
            return bad(format!(
                "budget interval [{}, {}] is empty",
                self.budget_interval.0 .0, self.budget_interval.1 .0
            ));
        }
        if !(self.range.is_finite() && self.range > 0.0) {
            return bad(format!("range must be positive, got {}", self.range));
        }
        let Area { width, height } = self.area;
        if !(width.is_finite() && height.is_finite() && width >= 0.0 && height >= 0.0) {
            return bad(format!("invalid area {width}x{height}"));
        }
        self.params.validate()?;
        Ok(())
    }
}

pub fn generate(config: &GenerationConfig) -> Result<Scenario, ScenarioError> {
    config.validate()?;
    let mut rng = SplitMix64::new(config.seed);
    let Area { width, height } = config.area;

    let positions: Vec<Point> = (0..config.n_nodes)
        .map(|_| {
            let x = rng.next_scaled(width);
            let y = rng.next_scaled(height);
            Point::new(x, y)
        })
        .collect();
    let (lo, hi) = config.budget_interval;
    let nodes: Vec<SensorNode> = positions
        .into_iter()
        .enumerate()
        .map(|(id, pos)| SensorNode {
            id,
            pos,
            budget: Nanojoules(rng.next_in_closed(lo.0, hi.0)),
            range: config.range,
        })
        .collect();

    let mut tasks = Vec::with_capacity(config.n_tasks);
    for id in 0..config.n_tasks {
        let mut draws = 0;
        let task = loop {
            let x = rng.next_scaled(width);
            let y = rng.next_scaled(height);
            draws += 1;
            let task = SensingTask {
                id,
                pos: Point::new(x, y),
            };
            if !config.require_coverage || nodes.iter().any(|n| covers(n, &task)) {
                break task;
            }
            if draws >= COVERAGE_DRAWS {
                return Err(ScenarioError::CoverageExhausted { task: id, draws });
            }
        };
        tasks.push(task);
    }

    Ok(Scenario::new(
        config.area,
        nodes,
        tasks,
        config.params,
        Some(config.seed),
    )?)
}

pub fn build_coverage(scenario: &Scenario) -> CoverageMatrix {
    CoverageMatrix::from_fn(scenario.nodes.len(), scenario.tasks.len(), |i, j| {
        covers(&scenario.nodes[i], &scenario.tasks[j])
    })
}
