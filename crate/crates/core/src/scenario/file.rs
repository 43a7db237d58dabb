use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{ModelError, ScenarioError};
use crate::model::{
    plan_cost, Area, Assignment, AssignmentPlan, CostBreakdown, EnergyParams, Mode, Nanojoules,
    NodeId, Point, Scenario, SensingTask, SensorNode, TaskId,
};

pub const SCENARIO_SCHEMA_VERSION: u64 = 1;
pub const PLAN_SCHEMA_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    schema_version: u64,
    area: AreaDoc,
    params: ParamsDoc,
    seed: Option<u64>,
    nodes: Vec<NodeDoc>,
    tasks: Vec<TaskDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AreaDoc {
    w: f64,
    h: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDoc {
    e_ps_nj: u64,
    e_vs_nj: u64,
    max_vs: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: usize,
    x: f64,
    y: f64,
    budget_nj: u64,
    range: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskDoc {
    id: usize,
    x: f64,
    y: f64,
}

/// Only used to check the version before the strict parse.
#[derive(Deserialize)]
struct VersionProbe {
    schema_version: Option<u64>,
}

impl From<&Scenario> for ScenarioDoc {
    fn from(s: &Scenario) -> Self {
        ScenarioDoc {
            schema_version: SCENARIO_SCHEMA_VERSION,
            area: AreaDoc {
                w: s.area.width,
                h: s.area.height,
            },
            params: ParamsDoc {
                e_ps_nj: s.params.e_ps.0,
                e_vs_nj: s.params.e_vs.0,
                max_vs: s.params.max_vs,
            },
            seed: s.seed,
            nodes: s
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: n.id,
                    x: n.pos.x,
                    y: n.pos.y,
                    budget_nj: n.budget.0,
                    range: n.range,
                })
                .collect(),
            tasks: s
                .tasks
                .iter()
                .map(|t| TaskDoc {
                    id: t.id,
                    x: t.pos.x,
                    y: t.pos.y,
                })
                .collect(),
        }
    }
}

impl ScenarioDoc {
    fn into_scenario(self) -> Result<Scenario, ModelError> {
        let params = EnergyParams {
            e_ps: Nanojoules(self.params.e_ps_nj),
            e_vs: Nanojoules(self.params.e_vs_nj),
            max_vs: self.params.max_vs,
        };
        let nodes = self
            .nodes
            .into_iter()
            .map(|n| SensorNode {
                id: n.id,
                pos: Point::new(n.x, n.y),
                budget: Nanojoules(n.budget_nj),
                range: n.range,
            })
            .collect();
        let tasks = self
            .tasks
            .into_iter()
            .map(|t| SensingTask {
                id: t.id,
                pos: Point::new(t.x, t.y),
            })
            .collect();
        Scenario::new(
            Area::new(self.area.w, self.area.h),
            nodes,
            tasks,
            params,
            self.seed,
        )
    }
}

fn check_version(context: &str, text: &str, expected: u64) -> Result<(), ScenarioError> {
    let probe: VersionProbe =
        serde_json::from_str(text).map_err(|e| ScenarioError::parse(context, e))?;
    match probe.schema_version {
        Some(found) if found != expected => Err(ScenarioError::Version {
            context: context.to_string(),
            found,
            expected,
        }),
        _ => Ok(()),
    }
}

pub fn scenario_to_json(scenario: &Scenario) -> String {
    let mut out = serde_json::to_string_pretty(&ScenarioDoc::from(scenario))
        .expect("scenario serialization cannot fail");
    out.push('\n');
    out
}

pub fn scenario_from_json(text: &str) -> Result<Scenario, ScenarioError> {
    check_version("scenario", text, SCENARIO_SCHEMA_VERSION)?;
    let doc: ScenarioDoc =
        serde_json::from_str(text).map_err(|e| ScenarioError::parse("scenario", e))?;
    Ok(doc.into_scenario()?)
}

/// Short content hash of the canonical scenario serialization.
pub fn scenario_fingerprint(scenario: &Scenario) -> String {
    let digest = Sha256::digest(scenario_to_json(scenario).as_bytes());
    let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Writes to a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), ScenarioError> {
    let io_err = |source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn read(path: &Path) -> Result<String, ScenarioError> {
    std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_scenario(scenario: &Scenario, path: &Path) -> Result<(), ScenarioError> {
    write_atomic(path, scenario_to_json(scenario).as_bytes())
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    scenario_from_json(&read(path)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentDoc {
    task: TaskId,
    node: NodeId,
    mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostDoc {
    c_ps_nj: u64,
    c_vs_nj: u64,
    total_nj: u64,
}

/// The serialized form of a solved plan, tied to its scenario by fingerprint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    schema_version: u64,
    pub scenario_ref: String,
    assignments: Vec<AssignmentDoc>,
    virtualized: Vec<NodeId>,
    cost: CostDoc,
}

impl PlanFile {
    /// Records are written in task order; the cost is recomputed from the plan.
    pub fn new(plan: &AssignmentPlan, scenario: &Scenario) -> Result<PlanFile, ModelError> {
        let cost = plan_cost(plan, scenario)?;
        Ok(PlanFile {
            schema_version: PLAN_SCHEMA_VERSION,
            scenario_ref: scenario_fingerprint(scenario),
            assignments: plan
                .sorted()
                .into_iter()
                .map(|a| AssignmentDoc {
                    task: a.task,
                    node: a.node,
                    mode: a.mode,
                })
                .collect(),
            virtualized: plan.virtualized.iter().copied().collect(),
            cost: CostDoc {
                c_ps_nj: cost.c_ps.0,
                c_vs_nj: cost.c_vs.0,
                total_nj: cost.total.0,
            },
        })
    }

    pub fn plan(&self) -> AssignmentPlan {
        AssignmentPlan::new(
            self.assignments
                .iter()
                .map(|a| Assignment {
                    task: a.task,
                    node: a.node,
                    mode: a.mode,
                })
                .collect(),
            self.virtualized.iter().copied().collect::<BTreeSet<_>>(),
        )
    }

    /// The cost as recorded in the file (not recomputed).
    pub fn recorded_cost(&self) -> CostBreakdown {
        CostBreakdown {
            c_ps: Nanojoules(self.cost.c_ps_nj),
            c_vs: Nanojoules(self.cost.c_vs_nj),
            total: Nanojoules(self.cost.total_nj),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plan serialization cannot fail");
        out.push('\n');
        out
    }
}

pub fn plan_from_json(text: &str) -> Result<PlanFile, ScenarioError> {
    check_version("plan", text, PLAN_SCHEMA_VERSION)?;
    serde_json::from_str(text).map_err(|e| ScenarioError::parse("plan", e))
}

pub fn save_plan(plan: &PlanFile, path: &Path) -> Result<(), ScenarioError> {
    write_atomic(path, plan.to_json().as_bytes())
}

pub fn load_plan(path: &Path) -> Result<PlanFile, ScenarioError> {
    plan_from_json(&read(path)?)
}
