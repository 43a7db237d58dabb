//! Exact and reference solvers.
//!
//! For a fixed choice of which nodes are virtualized, the rest of the
//! problem is a capacitated min-cost bipartite assignment, solved here as a
//! min-cost flow ([`assignment_subproblem`]). [`solve_exact`] branches over
//! the virtualization vector only, bounding each partial choice with a
//! relaxed flow. [`brute_force`] enumerates plans directly and checks them
//! with [`validate_plan`](crate::model::validate_plan); it shares no code
//! with the flow path.

mod bnb;
mod brute;
mod flow;
mod greedy;
mod matching;
mod traditional;

pub use bnb::{solve_exact, solve_exact_with, BoundKind, ExactOptions};
pub use brute::{brute_force, brute_force_with_cap, DEFAULT_BRUTE_CAP};
pub use flow::MinCostFlow;
pub use greedy::greedy_upper_bound;
pub use matching::hopcroft_karp;
pub use traditional::solve_traditional;

use std::time::Duration;

use crate::model::{
    Assignment, AssignmentPlan, CostBreakdown, CoverageMatrix, Mode, Nanojoules, NodeId, Scenario,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// Proven minimum cost.
    Optimal,
    /// A valid plan with no optimality claim (greedy).
    Feasible,
    Infeasible,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Optimal => "Optimal",
            Status::Feasible => "Feasible",
            Status::Infeasible => "Infeasible",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Search-tree nodes (branch-and-bound) or candidate plans (brute force).
    pub nodes_explored: u64,
    pub bound_prunes: u64,
    pub flow_calls: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: Status,
    pub plan: Option<AssignmentPlan>,
    pub cost: Option<CostBreakdown>,
    pub stats: SolveStats,
}

impl SolveResult {
    pub(crate) fn infeasible(stats: SolveStats) -> Self {
        SolveResult {
            status: Status::Infeasible,
            plan: None,
            cost: None,
            stats,
        }
    }

    pub(crate) fn with_plan(
        status: Status,
        plan: AssignmentPlan,
        scenario: &Scenario,
        stats: SolveStats,
    ) -> Self {
        let cost = crate::model::plan_cost(&plan, scenario)
            .expect("solver plans only reference scenario ids");
        SolveResult {
            status,
            plan: Some(plan),
            cost: Some(cost),
            stats,
        }
    }

    pub fn total(&self) -> Option<Nanojoules> {
        self.cost.map(|c| c.total)
    }

    pub fn is_infeasible(&self) -> bool {
        self.status == Status::Infeasible
    }
}

/// What a node may do once the energy budget is taken into account.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeCapacity {
    /// The budget covers one physical sensor.
    pub ps_allowed: bool,
    /// VS tasks the node can host if virtualized, within both `max_vs` and its budget.
    pub vs_capacity: u32,
}

impl NodeCapacity {
    pub fn of(budget: Nanojoules, scenario: &Scenario) -> Self {
        let p = &scenario.params;
        if budget < p.e_ps {
            return NodeCapacity {
                ps_allowed: false,
                vs_capacity: 0,
            };
        }
        let vs_capacity = match (budget.0 - p.e_ps.0).checked_div(p.e_vs.0) {
            None => p.max_vs,
            Some(fit) => fit.min(p.max_vs as u64) as u32,
        };
        NodeCapacity {
            ps_allowed: true,
            vs_capacity,
        }
    }
}

pub fn capacities(scenario: &Scenario) -> Vec<NodeCapacity> {
    scenario
        .nodes
        .iter()
        .map(|n| NodeCapacity::of(n.budget, scenario))
        .collect()
}

/// Operating mode fixed for one node in the subproblem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeMode {
    Virtualized,
    /// May run at most one PS task (or stay idle).
    Physical,
    /// Runs nothing.
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubproblemResult {
    pub feasible: bool,
    pub ps_count: usize,
    pub vs_count: usize,
    /// Where each task was routed; `None` for tasks left unassigned.
    pub task_routing: Vec<Option<(NodeId, Mode)>>,
    /// `e_ps * ps_count + e_vs * vs_count`; excludes the virtualization charge.
    pub variable_cost: Nanojoules,
}

impl SubproblemResult {
    /// The plan implied by the routing plus the given virtualized set.
    pub fn plan(&self, virtualized: impl IntoIterator<Item = NodeId>) -> AssignmentPlan {
        plan_from_routing(&self.task_routing, virtualized)
    }
}

pub(crate) fn plan_from_routing(
    routing: &[Option<(NodeId, Mode)>],
    virtualized: impl IntoIterator<Item = NodeId>,
) -> AssignmentPlan {
    let assignments = routing
        .iter()
        .enumerate()
        .filter_map(|(task, r)| r.map(|(node, mode)| Assignment { task, node, mode }))
        .collect();
    AssignmentPlan::new(assignments, virtualized.into_iter().collect())
}

/// Flow network on tasks and per-node PS/VS slots. `modes[i] = None`
/// offers both slots without the virtualization charge.
struct SlotNetwork {
    graph: MinCostFlow,
    source: usize,
    sink: usize,
    /// (task, node, mode, arc index)
    routes: Vec<(usize, NodeId, Mode, usize)>,
}

impl SlotNetwork {
    fn build(
        scenario: &Scenario,
        coverage: &CoverageMatrix,
        caps: &[NodeCapacity],
        modes: &[Option<NodeMode>],
        vs_arc_cost: &[i64],
    ) -> Self {
        let n_tasks = scenario.tasks.len();
        let n_nodes = scenario.nodes.len();
        let source = 0;
        let task_base = 1;
        let slot_base = task_base + n_tasks;
        let sink = slot_base + 2 * n_nodes;
        let mut graph = MinCostFlow::new(sink + 1);

        let ps_open =
            |i: usize| caps[i].ps_allowed && matches!(modes[i], Some(NodeMode::Physical) | None);
        let vs_open = |i: usize| {
            caps[i].vs_capacity > 0 && matches!(modes[i], Some(NodeMode::Virtualized) | None)
        };

        let e_ps = scenario.params.e_ps.0 as i64;
        let mut routes = Vec::new();
        for j in 0..n_tasks {
            graph.add_arc(source, task_base + j, 1, 0);
            for i in coverage.coverers(j) {
                if ps_open(i) {
                    let arc = graph.add_arc(task_base + j, slot_base + 2 * i, 1, e_ps);
                    routes.push((j, i, Mode::Ps, arc));
                }
                if vs_open(i) {
                    let arc =
                        graph.add_arc(task_base + j, slot_base + 2 * i + 1, 1, vs_arc_cost[i]);
                    routes.push((j, i, Mode::Vs, arc));
                }
            }
        }
        for (i, cap) in caps.iter().enumerate().take(n_nodes) {
            if ps_open(i) {
                graph.add_arc(slot_base + 2 * i, sink, 1, 0);
            }
            if vs_open(i) {
                graph.add_arc(slot_base + 2 * i + 1, sink, cap.vs_capacity as u64, 0);
            }
        }
        SlotNetwork {
            graph,
            source,
            sink,
            routes,
        }
    }

    fn solve(mut self, n_tasks: usize) -> (u64, i64, Vec<Option<(NodeId, Mode)>>) {
        let (flow, cost) = self.graph.run(self.source, self.sink, n_tasks as u64);
        let mut routing = vec![None; n_tasks];
        for &(j, i, mode, arc) in &self.routes {
            if self.graph.flow(arc) > 0 {
                routing[j] = Some((i, mode));
            }
        }
        (flow, cost, routing)
    }
}

/// Min-cost routing of all tasks for a fixed per-node mode vector.
/// Feasible iff every task can be routed.
pub fn assignment_subproblem(scenario: &Scenario, modes: &[NodeMode]) -> SubproblemResult {
    let coverage = crate::scenario::build_coverage(scenario);
    let caps = capacities(scenario);
    let modes: Vec<Option<NodeMode>> = modes.iter().copied().map(Some).collect();
    subproblem_with(scenario, &coverage, &caps, &modes)
}

pub(crate) fn subproblem_with(
    scenario: &Scenario,
    coverage: &CoverageMatrix,
    caps: &[NodeCapacity],
    modes: &[Option<NodeMode>],
) -> SubproblemResult {
    let e_vs = scenario.params.e_vs.0 as i64;
    let vs_cost = vec![e_vs; scenario.nodes.len()];
    let n_tasks = scenario.tasks.len();
    let (flow, _, routing) =
        SlotNetwork::build(scenario, coverage, caps, modes, &vs_cost).solve(n_tasks);
    let ps_count = routing
        .iter()
        .filter(|r| matches!(r, Some((_, Mode::Ps))))
        .count();
    let vs_count = routing
        .iter()
        .filter(|r| matches!(r, Some((_, Mode::Vs))))
        .count();
    let p = &scenario.params;
    SubproblemResult {
        feasible: flow == n_tasks as u64,
        ps_count,
        vs_count,
        task_routing: routing,
        variable_cost: p.e_ps * ps_count as u64 + p.e_vs * vs_count as u64,
    }
}

/// Lower bound on the cost of any plan consistent with a partial mode
/// vector (`None` = undecided), or `None` if no completion is feasible.
///
/// Fixed virtualized nodes pay `e_ps` up front. Undecided nodes offer both a
/// PS slot and a VS slot; under [`BoundKind::Plain`] their VS arcs cost
/// `e_vs`, under [`BoundKind::Amortized`] they cost
/// `e_vs + floor(e_ps / vs_capacity)`, since a virtualized node hosting
/// `k <= vs_capacity` tasks pays at least that much per task.
pub fn lower_bound(
    scenario: &Scenario,
    partial: &[Option<NodeMode>],
    kind: BoundKind,
) -> Option<Nanojoules> {
    let coverage = crate::scenario::build_coverage(scenario);
    let caps = capacities(scenario);
    lower_bound_with(scenario, &coverage, &caps, partial, kind)
}

pub(crate) fn lower_bound_with(
    scenario: &Scenario,
    coverage: &CoverageMatrix,
    caps: &[NodeCapacity],
    partial: &[Option<NodeMode>],
    kind: BoundKind,
) -> Option<Nanojoules> {
    relaxation(scenario, coverage, caps, partial, kind).map(|(bound, _)| bound)
}

/// Per task, the node and mode it is routed to.
pub(crate) type Routing = Vec<Option<(NodeId, Mode)>>;

/// The bound together with the routing that attains it.
pub(crate) fn relaxation(
    scenario: &Scenario,
    coverage: &CoverageMatrix,
    caps: &[NodeCapacity],
    partial: &[Option<NodeMode>],
    kind: BoundKind,
) -> Option<(Nanojoules, Routing)> {
    let p = &scenario.params;
    let vs_cost: Vec<i64> = partial
        .iter()
        .zip(caps)
        .map(|(mode, cap)| match (mode, kind) {
            (None, BoundKind::Amortized) if cap.vs_capacity > 0 => {
                (p.e_vs.0 + p.e_ps.0 / cap.vs_capacity as u64) as i64
            }
            _ => p.e_vs.0 as i64,
        })
        .collect();
    let n_tasks = scenario.tasks.len();
    let (flow, cost, routing) =
        SlotNetwork::build(scenario, coverage, caps, partial, &vs_cost).solve(n_tasks);
    if flow < n_tasks as u64 {
        return None;
    }
    let fixed = partial
        .iter()
        .filter(|m| **m == Some(NodeMode::Virtualized))
        .count() as u64;
    Some((p.e_ps * fixed + Nanojoules(cost as u64), routing))
}
