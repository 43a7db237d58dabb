use std::time::Instant;

use super::{capacities, hopcroft_karp, SolveResult, SolveStats, Status};
use crate::model::{Assignment, AssignmentPlan, Mode, Scenario};

/// Baseline without virtualization: every task gets its own physical node.
/// Optimal (at `|tasks| * e_ps`) iff a task-perfect matching onto covering
/// nodes whose budget admits a physical sensor exists.
pub fn solve_traditional(scenario: &Scenario) -> SolveResult {
    let start = Instant::now();
    let coverage = crate::scenario::build_coverage(scenario);
    let caps = capacities(scenario);
    let adj: Vec<Vec<usize>> = (0..scenario.tasks.len())
        .map(|j| {
            coverage
                .coverers(j)
                .filter(|&i| caps[i].ps_allowed)
                .collect()
        })
        .collect();
    let matching = hopcroft_karp(&adj, scenario.nodes.len());
    let stats = SolveStats {
        wall_time: start.elapsed(),
        ..SolveStats::default()
    };

    let assignments: Option<Vec<Assignment>> = matching
        .iter()
        .enumerate()
        .map(|(task, m)| {
            m.map(|node| Assignment {
                task,
                node,
                mode: Mode::Ps,
            })
        })
        .collect();
    match assignments {
        Some(assignments) => SolveResult::with_plan(
            Status::Optimal,
            AssignmentPlan::from_assignments(assignments),
            scenario,
            stats,
        ),
        None => SolveResult::infeasible(stats),
    }
}
