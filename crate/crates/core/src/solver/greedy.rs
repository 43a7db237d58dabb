use std::collections::BTreeSet;
use std::time::Instant;

use super::{capacities, subproblem_with, NodeMode, SolveResult, SolveStats, Status};
use crate::model::Scenario;

/// Warm-start heuristic; never better than optimal and may fail where the
/// exact solver succeeds.
///
/// Repeatedly virtualizes the node covering the most still-unassigned tasks
/// (ties to the lower id) and packs up to its VS capacity of them, tasks
/// with the fewest alternative coverers first. It stops once no node can
/// pack two tasks. The remaining tasks, and the exact routing, come from the
/// min-cost assignment with that virtualized set fixed and every other node
/// physical.
pub fn greedy_upper_bound(scenario: &Scenario) -> SolveResult {
    let start = Instant::now();
    let coverage = crate::scenario::build_coverage(scenario);
    let caps = capacities(scenario);
    let n_nodes = scenario.nodes.len();
    let n_tasks = scenario.tasks.len();

    let coverers: Vec<usize> = (0..n_tasks).map(|j| coverage.coverers(j).count()).collect();
    let mut assigned = vec![false; n_tasks];
    let mut virtualized = BTreeSet::new();

    loop {
        let pick = (0..n_nodes)
            .filter(|&i| !virtualized.contains(&i) && caps[i].vs_capacity >= 2)
            .map(|i| {
                let open = (0..n_tasks)
                    .filter(|&j| !assigned[j] && coverage.get(i, j))
                    .count();
                (open, i)
            })
            .filter(|&(open, _)| open >= 2)
            .max_by_key(|&(open, i)| (open, std::cmp::Reverse(i)));
        let Some((_, node)) = pick else { break };

        let mut open: Vec<usize> = (0..n_tasks)
            .filter(|&j| !assigned[j] && coverage.get(node, j))
            .collect();
        open.sort_by_key(|&j| (coverers[j], j));
        for &j in open.iter().take(caps[node].vs_capacity as usize) {
            assigned[j] = true;
        }
        virtualized.insert(node);
    }

    let modes: Vec<Option<NodeMode>> = (0..n_nodes)
        .map(|i| {
            Some(if virtualized.contains(&i) {
                NodeMode::Virtualized
            } else {
                NodeMode::Physical
            })
        })
        .collect();
    let routed = subproblem_with(scenario, &coverage, &caps, &modes);
    let mut stats = SolveStats {
        flow_calls: 1,
        ..SolveStats::default()
    };
    stats.wall_time = start.elapsed();
    if routed.feasible {
        let plan = routed.plan(virtualized);
        SolveResult::with_plan(Status::Feasible, plan, scenario, stats)
    } else {
        SolveResult::infeasible(stats)
    }
}
