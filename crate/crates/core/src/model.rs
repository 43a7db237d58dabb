//! Domain types for the task-assignment problem, per-plan energy accounting
//! and the constraint checker.
//!
//! Energy is carried as integer nanojoules throughout so that cost
//! comparisons inside the solver are exact.

use std::collections::BTreeSet;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

pub type NodeId = usize;
pub type TaskId = usize;

/// An amount of energy in nanojoules.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Nanojoules(pub u64);

impl Nanojoules {
    pub const ZERO: Nanojoules = Nanojoules(0);

    pub fn get(self) -> u64 {
        self.0
    }
}

impl Add for Nanojoules {
    type Output = Nanojoules;
    fn add(self, rhs: Nanojoules) -> Nanojoules {
        Nanojoules(self.0 + rhs.0)
    }
}

impl AddAssign for Nanojoules {
    fn add_assign(&mut self, rhs: Nanojoules) {
        self.0 += rhs.0;
    }
}

impl Mul<u64> for Nanojoules {
    type Output = Nanojoules;
    fn mul(self, rhs: u64) -> Nanojoules {
        Nanojoules(self.0 * rhs)
    }
}

impl Sum for Nanojoules {
    fn sum<I: Iterator<Item = Nanojoules>>(iter: I) -> Nanojoules {
        iter.fold(Nanojoules::ZERO, Add::add)
    }
}

impl fmt::Display for Nanojoules {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} nJ", self.0)
    }
}

/// Energy model constants shared by every node of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EnergyParams {
    /// Cost of running one sensor node (physical sensor, or the host of VSs).
    pub e_ps: Nanojoules,
    /// Overhead per virtual sensor on a virtualized node.
    pub e_vs: Nanojoules,
    /// Maximum number of virtual sensors one node can host.
    pub max_vs: u32,
}

impl EnergyParams {
    pub fn new(e_ps: u64, e_vs: u64, max_vs: u32) -> Result<Self, ModelError> {
        let params = EnergyParams {
            e_ps: Nanojoules(e_ps),
            e_vs: Nanojoules(e_vs),
            max_vs,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.e_ps.0 == 0 {
            return Err(ModelError::InvalidParams("e_ps must be positive".into()));
        }
        if self.max_vs == 0 {
            return Err(ModelError::InvalidParams(
                "max_vs must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Multiplies both energy constants by `k`.
    pub fn scaled(&self, k: u64) -> EnergyParams {
        EnergyParams {
            e_ps: self.e_ps * k,
            e_vs: self.e_vs * k,
            max_vs: self.max_vs,
        }
    }
}

impl Default for EnergyParams {
    /// 0.017 mJ per active node, a 10% overhead per VS, four VSs per node.
    fn default() -> Self {
        EnergyParams {
            e_ps: Nanojoules(17_000),
            e_vs: Nanojoules(1_700),
            max_vs: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

impl Area {
    pub fn new(width: f64, height: f64) -> Area {
        Area { width, height }
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensorNode {
    pub id: NodeId,
    pub pos: Point,
    /// Energy available to this node for the decision epoch.
    pub budget: Nanojoules,
    /// Sensing radius in meters.
    pub range: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensingTask {
    pub id: TaskId,
    pub pos: Point,
}

/// True when the task lies within the node's sensing range (boundary included).
pub fn covers(node: &SensorNode, task: &SensingTask) -> bool {
    node.pos.distance(&task.pos) <= node.range
}

/// A problem instance. Node and task ids equal their index in the vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub area: Area,
    pub nodes: Vec<SensorNode>,
    pub tasks: Vec<SensingTask>,
    pub params: EnergyParams,
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn new(
        area: Area,
        nodes: Vec<SensorNode>,
        tasks: Vec<SensingTask>,
        params: EnergyParams,
        seed: Option<u64>,
    ) -> Result<Scenario, ModelError> {
        let scenario = Scenario {
            area,
            nodes,
            tasks,
            params,
            seed,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.params.validate()?;
        if !(self.area.width.is_finite()
            && self.area.height.is_finite()
            && self.area.width >= 0.0
            && self.area.height >= 0.0)
        {
            return Err(ModelError::InvalidArea {
                width: self.area.width,
                height: self.area.height,
            });
        }
        for (index, node) in self.nodes.iter().enumerate() {
            if node.id != index {
                return Err(ModelError::NonSequentialId {
                    kind: "node",
                    index,
                    id: node.id,
                });
            }
            if !(node.range.is_finite() && node.range > 0.0) {
                return Err(ModelError::InvalidRange {
                    node: node.id,
                    range: node.range,
                });
            }
            if !self.area.contains(&node.pos) {
                return Err(ModelError::OutsideArea {
                    kind: "node",
                    id: node.id,
                });
            }
        }
        for (index, task) in self.tasks.iter().enumerate() {
            if task.id != index {
                return Err(ModelError::NonSequentialId {
                    kind: "task",
                    index,
                    id: task.id,
                });
            }
            if !self.area.contains(&task.pos) {
                return Err(ModelError::OutsideArea {
                    kind: "task",
                    id: task.id,
                });
            }
        }
        Ok(())
    }

    /// Copy with energy constants and every budget multiplied by `k`.
    pub fn scaled_energy(&self, k: u64) -> Scenario {
        let mut out = self.clone();
        out.params = self.params.scaled(k);
        for node in &mut out.nodes {
            node.budget = node.budget * k;
        }
        out
    }
}

/// The binary node-by-task coverage matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageMatrix {
    n_nodes: usize,
    n_tasks: usize,
    entries: Vec<bool>,
}

impl CoverageMatrix {
    pub fn from_fn(n_nodes: usize, n_tasks: usize, f: impl Fn(NodeId, TaskId) -> bool) -> Self {
        let mut entries = Vec::with_capacity(n_nodes * n_tasks);
        for i in 0..n_nodes {
            for j in 0..n_tasks {
                entries.push(f(i, j));
            }
        }
        CoverageMatrix {
            n_nodes,
            n_tasks,
            entries,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_tasks(&self) -> usize {
        self.n_tasks
    }

    pub fn get(&self, node: NodeId, task: TaskId) -> bool {
        self.entries[node * self.n_tasks + task]
    }

    pub fn row(&self, node: NodeId) -> &[bool] {
        &self.entries[node * self.n_tasks..(node + 1) * self.n_tasks]
    }

    /// Nodes able to execute `task`, in ascending id order.
    pub fn coverers(&self, task: TaskId) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n_nodes).filter(move |&i| self.get(i, task))
    }

    /// Number of tasks the node covers.
    pub fn degree(&self, node: NodeId) -> usize {
        self.row(node).iter().filter(|&&c| c).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// The task runs directly on the node's physical sensor.
    #[serde(rename = "PS")]
    Ps,
    /// The task runs on a virtual sensor of a virtualized node.
    #[serde(rename = "VS")]
    Vs,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ps => "PS",
            Mode::Vs => "VS",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    pub task: TaskId,
    pub node: NodeId,
    pub mode: Mode,
}

/// A candidate solution: where each task runs, and which nodes are virtualized.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssignmentPlan {
    pub assignments: Vec<Assignment>,
    pub virtualized: BTreeSet<NodeId>,
}

impl AssignmentPlan {
    pub fn new(assignments: Vec<Assignment>, virtualized: BTreeSet<NodeId>) -> Self {
        AssignmentPlan {
            assignments,
            virtualized,
        }
    }

    /// Builds a plan whose virtualized set is exactly the nodes hosting a VS task.
    pub fn from_assignments(assignments: Vec<Assignment>) -> Self {
        let virtualized = assignments
            .iter()
            .filter(|a| a.mode == Mode::Vs)
            .map(|a| a.node)
            .collect();
        AssignmentPlan {
            assignments,
            virtualized,
        }
    }

    pub fn is_virtualized(&self, node: NodeId) -> bool {
        self.virtualized.contains(&node)
    }

    /// Assignment records sorted by task id.
    pub fn sorted(&self) -> Vec<Assignment> {
        let mut out = self.assignments.clone();
        out.sort();
        out
    }

    fn load(&self, node: NodeId) -> (u64, u64) {
        self.assignments
            .iter()
            .filter(|a| a.node == node)
            .fold((0, 0), |(ps, vs), a| match a.mode {
                Mode::Ps => (ps + 1, vs),
                Mode::Vs => (ps, vs + 1),
            })
    }

    fn check_ids(&self, scenario: &Scenario) -> Result<(), ModelError> {
        for a in &self.assignments {
            if a.task >= scenario.tasks.len() {
                return Err(ModelError::UnknownTask { task: a.task });
            }
            if a.node >= scenario.nodes.len() {
                return Err(ModelError::UnknownNode { node: a.node });
            }
        }
        if let Some(&node) = self
            .virtualized
            .iter()
            .find(|&&n| n >= scenario.nodes.len())
        {
            return Err(ModelError::UnknownNode { node });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CostBreakdown {
    pub c_ps: Nanojoules,
    pub c_vs: Nanojoules,
    pub total: Nanojoules,
}

impl CostBreakdown {
    pub fn new(c_ps: Nanojoules, c_vs: Nanojoules) -> Self {
        CostBreakdown {
            c_ps,
            c_vs,
            total: c_ps + c_vs,
        }
    }
}

/// Physical-sensor cost plus virtualization cost (hosting charge and per-VS overhead).
pub fn plan_cost(plan: &AssignmentPlan, scenario: &Scenario) -> Result<CostBreakdown, ModelError> {
    plan.check_ids(scenario)?;
    let p = &scenario.params;
    let ps = plan
        .assignments
        .iter()
        .filter(|a| a.mode == Mode::Ps)
        .count() as u64;
    let vs = plan.assignments.len() as u64 - ps;
    Ok(CostBreakdown::new(
        p.e_ps * ps,
        p.e_ps * plan.virtualized.len() as u64 + p.e_vs * vs,
    ))
}

/// The share of the plan's cost attributable to one node.
pub fn node_energy_use(
    plan: &AssignmentPlan,
    node: NodeId,
    scenario: &Scenario,
) -> Result<Nanojoules, ModelError> {
    if node >= scenario.nodes.len() {
        return Err(ModelError::UnknownNode { node });
    }
    let p = &scenario.params;
    let (ps, vs) = plan.load(node);
    let host = if plan.is_virtualized(node) {
        p.e_ps
    } else {
        Nanojoules::ZERO
    };
    Ok(p.e_ps * ps + host + p.e_vs * vs)
}

/// Which family of constraints a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// Every task runs exactly once, on a node that covers it.
    SingleAssignment,
    /// Physical nodes run at most one PS task and no VS; virtualized nodes run no PS task.
    ModeExclusivity,
    /// At most `max_vs` VS tasks per node.
    VsCapacity,
    /// A node's own consumption stays within its budget.
    EnergyBudget,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::SingleAssignment => "single-assignment",
            Constraint::ModeExclusivity => "mode-exclusivity",
            Constraint::VsCapacity => "vs-capacity",
            Constraint::EnergyBudget => "energy-budget",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownTask {
        task: TaskId,
    },
    UnknownNode {
        node: NodeId,
    },
    /// Task assigned `observed` times instead of once.
    AssignmentCount {
        task: TaskId,
        observed: usize,
    },
    NotCovered {
        task: TaskId,
        node: NodeId,
    },
    PsOnVirtualized {
        node: NodeId,
        observed: u64,
    },
    PsOverCapacity {
        node: NodeId,
        observed: u64,
    },
    VsOnPhysical {
        node: NodeId,
        observed: u64,
    },
    VsOverCapacity {
        node: NodeId,
        observed: u64,
        allowed: u64,
    },
    EnergyExceeded {
        node: NodeId,
        observed: Nanojoules,
        allowed: Nanojoules,
    },
}

impl Violation {
    pub fn constraint(&self) -> Constraint {
        match self {
            Violation::UnknownTask { .. }
            | Violation::UnknownNode { .. }
            | Violation::AssignmentCount { .. }
            | Violation::NotCovered { .. } => Constraint::SingleAssignment,
            Violation::PsOnVirtualized { .. }
            | Violation::PsOverCapacity { .. }
            | Violation::VsOnPhysical { .. } => Constraint::ModeExclusivity,
            Violation::VsOverCapacity { .. } => Constraint::VsCapacity,
            Violation::EnergyExceeded { .. } => Constraint::EnergyBudget,
        }
    }

    /// The node the violation concerns, if any.
    pub fn node(&self) -> Option<NodeId> {
        match *self {
            Violation::UnknownNode { node }
            | Violation::NotCovered { node, .. }
            | Violation::PsOnVirtualized { node, .. }
            | Violation::PsOverCapacity { node, .. }
            | Violation::VsOnPhysical { node, .. }
            | Violation::VsOverCapacity { node, .. }
            | Violation::EnergyExceeded { node, .. } => Some(node),
            _ => None,
        }
    }

    pub fn task(&self) -> Option<TaskId> {
        match *self {
            Violation::UnknownTask { task }
            | Violation::AssignmentCount { task, .. }
            | Violation::NotCovered { task, .. } => Some(task),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.constraint())?;
        match self {
            Violation::UnknownTask { task } => write!(f, "unknown task id {task}"),
            Violation::UnknownNode { node } => write!(f, "unknown node id {node}"),
            Violation::AssignmentCount { task, observed } => {
                write!(
                    f,
                    "task {task} assigned {observed} times, expected exactly 1"
                )
            }
            Violation::NotCovered { task, node } => {
                write!(
                    f,
                    "task {task} assigned to node {node}, which does not cover it"
                )
            }
            Violation::PsOnVirtualized { node, observed } => write!(
                f,
                "virtualized node {node} runs {observed} PS tasks, allowed 0"
            ),
            Violation::PsOverCapacity { node, observed } => {
                write!(f, "node {node} runs {observed} PS tasks, allowed 1")
            }
            Violation::VsOnPhysical { node, observed } => write!(
                f,
                "non-virtualized node {node} runs {observed} VS tasks, allowed 0"
            ),
            Violation::VsOverCapacity {
                node,
                observed,
                allowed,
            } => write!(f, "node {node} runs {observed} VS tasks, allowed {allowed}"),
            Violation::EnergyExceeded {
                node,
                observed,
                allowed,
            } => write!(f, "node {node} uses {observed}, budget {allowed}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// Valid, but the node pays the hosting charge for nothing.
    IdleVirtualizedNode { node: NodeId },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::IdleVirtualizedNode { node } => {
                write!(f, "node {node} is virtualized but hosts no VS task")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, constraint: Constraint) -> bool {
        self.violations.iter().any(|v| v.constraint() == constraint)
    }
}

/// Checks a plan against every constraint of the model. Violations are
/// reported, never raised.
pub fn validate_plan(plan: &AssignmentPlan, scenario: &Scenario) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n_nodes = scenario.nodes.len();
    let n_tasks = scenario.tasks.len();
    let p = &scenario.params;

    let mut times_assigned = vec![0usize; n_tasks];
    let mut ps_load = vec![0u64; n_nodes];
    let mut vs_load = vec![0u64; n_nodes];
    for a in &plan.assignments {
        let task_ok = a.task < n_tasks;
        let node_ok = a.node < n_nodes;
        if !task_ok {
            report
                .violations
                .push(Violation::UnknownTask { task: a.task });
        }
        if !node_ok {
            report
                .violations
                .push(Violation::UnknownNode { node: a.node });
        }
        if task_ok {
            times_assigned[a.task] += 1;
        }
        if node_ok {
            match a.mode {
                Mode::Ps => ps_load[a.node] += 1,
                Mode::Vs => vs_load[a.node] += 1,
            }
        }
        if task_ok && node_ok && !covers(&scenario.nodes[a.node], &scenario.tasks[a.task]) {
            report.violations.push(Violation::NotCovered {
                task: a.task,
                node: a.node,
            });
        }
    }
    for &node in plan.virtualized.iter().filter(|&&n| n >= n_nodes) {
        report.violations.push(Violation::UnknownNode { node });
    }
    for (task, &observed) in times_assigned.iter().enumerate() {
        if observed != 1 {
            report
                .violations
                .push(Violation::AssignmentCount { task, observed });
        }
    }

    for node in 0..n_nodes {
        let (ps, vs) = (ps_load[node], vs_load[node]);
        let virtualized = plan.is_virtualized(node);
        if virtualized {
            if ps > 0 {
                report
                    .violations
                    .push(Violation::PsOnVirtualized { node, observed: ps });
            }
            if vs == 0 {
                report.warnings.push(Warning::IdleVirtualizedNode { node });
            }
        } else {
            if ps > 1 {
                report
                    .violations
                    .push(Violation::PsOverCapacity { node, observed: ps });
            }
            if vs > 0 {
                report
                    .violations
                    .push(Violation::VsOnPhysical { node, observed: vs });
            }
        }
        let allowed = if virtualized { p.max_vs as u64 } else { 0 };
        if virtualized && vs > allowed {
            report.violations.push(Violation::VsOverCapacity {
                node,
                observed: vs,
                allowed,
            });
        }
        let host = if virtualized {
            p.e_ps
        } else {
            Nanojoules::ZERO
        };
        let used = p.e_ps * ps + host + p.e_vs * vs;
        let budget = scenario.nodes[node].budget;
        if used > budget {
            report.violations.push(Violation::EnergyExceeded {
                node,
                observed: used,
                allowed: budget,
            });
        }
    }
    report
}
