use std::cmp::Reverse;
use std::time::Instant;

use super::{
    capacities, greedy_upper_bound, plan_from_routing, relaxation, NodeCapacity, NodeMode,
    SolveResult, SolveStats, Status,
};
use crate::model::{AssignmentPlan, CoverageMatrix, Nanojoules, NodeId, Scenario};

/// How undecided nodes are priced in the relaxation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// VS arcs of undecided nodes cost `e_vs`, with no hosting charge.
    Plain,
    /// VS arcs of undecided nodes also carry `floor(e_ps / vs_capacity)`.
    #[default]
    Amortized,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExactOptions {
    pub bound: BoundKind,
    /// Start from an empty incumbent instead of the greedy plan.
    pub skip_warm_start: bool,
}

/// Provably optimal plan, or `Infeasible`.
///
/// Branches on nodes in order of descending coverage degree (ties by id),
/// trying the virtualized branch first. A subtree is pruned when its bound
/// is at least the incumbent's cost, so among equal-cost optima the first
/// one reached in this order (or the greedy plan, if it is already optimal)
/// is returned.
pub fn solve_exact(scenario: &Scenario) -> SolveResult {
    solve_exact_with(scenario, &ExactOptions::default())
}

pub fn solve_exact_with(scenario: &Scenario, options: &ExactOptions) -> SolveResult {
    let start = Instant::now();
    let coverage = crate::scenario::build_coverage(scenario);
    let caps = capacities(scenario);

    let mut order: Vec<NodeId> = (0..scenario.nodes.len()).collect();
    order.sort_by_key(|&i| (Reverse(coverage.degree(i)), i));

    let mut stats = SolveStats::default();
    let mut best = None;
    if !options.skip_warm_start {
        let warm = greedy_upper_bound(scenario);
        stats.flow_calls += warm.stats.flow_calls;
        if let (Some(plan), Some(cost)) = (warm.plan, warm.cost) {
            best = Some((cost.total, plan));
        }
    }

    let mut search = Search {
        scenario,
        coverage: &coverage,
        caps: &caps,
        order: &order,
        bound: options.bound,
        modes: vec![None; scenario.nodes.len()],
        best,
        stats,
    };
    search.visit(0);

    let mut stats = search.stats;
    stats.wall_time = start.elapsed();
    match search.best {
        Some((_, plan)) => SolveResult::with_plan(Status::Optimal, plan, scenario, stats),
        None => SolveResult::infeasible(stats),
    }
}

struct Search<'a> {
    scenario: &'a Scenario,
    coverage: &'a CoverageMatrix,
    caps: &'a [NodeCapacity],
    order: &'a [NodeId],
    bound: BoundKind,
    modes: Vec<Option<NodeMode>>,
    best: Option<(Nanojoules, AssignmentPlan)>,
    stats: SolveStats,
}

impl Search<'_> {
    fn visit(&mut self, depth: usize) {
        self.stats.nodes_explored += 1;
        self.stats.flow_calls += 1;
        let Some((bound, routing)) = relaxation(
            self.scenario,
            self.coverage,
            self.caps,
            &self.modes,
            self.bound,
        ) else {
            self.stats.bound_prunes += 1;
            return;
        };
        if matches!(&self.best, Some((incumbent, _)) if bound >= *incumbent) {
            self.stats.bound_prunes += 1;
            return;
        }
        if depth == self.order.len() {
            // Every node is fixed, so the relaxation is the exact cost.
            let virtualized = self
                .modes
                .iter()
                .enumerate()
                .filter(|(_, m)| **m == Some(NodeMode::Virtualized))
                .map(|(i, _)| i);
            let plan = plan_from_routing(&routing, virtualized);
            self.best = Some((bound, plan));
            return;
        }

        let node = self.order[depth];
        if self.caps[node].vs_capacity > 0 {
            self.modes[node] = Some(NodeMode::Virtualized);
            self.visit(depth + 1);
        }
        self.modes[node] = Some(NodeMode::Physical);
        self.visit(depth + 1);
        self.modes[node] = None;
    }
}
