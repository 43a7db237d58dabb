use std::time::Instant;

use super::{SolveResult, SolveStats, Status};
use crate::error::SolveError;
use crate::model::{
    covers, plan_cost, validate_plan, Assignment, AssignmentPlan, Mode, Nanojoules, NodeId,
    Scenario,
};

/// Largest task count [`brute_force`] accepts by default.
pub const DEFAULT_BRUTE_CAP: usize = 8;

pub fn brute_force(scenario: &Scenario) -> Result<SolveResult, SolveError> {
    brute_force_with_cap(scenario, DEFAULT_BRUTE_CAP)
}

/// Exhaustive reference solver.
///
/// Each task independently picks a (node, mode) pair among the nodes that
/// cover it; the virtualized set is the set of nodes holding a VS task.
/// Every combination goes through `validate_plan` and the cheapest valid
/// one wins, the lexicographically smallest assignment vector on ties.
pub fn brute_force_with_cap(scenario: &Scenario, cap: usize) -> Result<SolveResult, SolveError> {
    let n_tasks = scenario.tasks.len();
    if n_tasks > cap {
        return Err(SolveError::TooLarge {
            tasks: n_tasks,
            cap,
        });
    }
    let start = Instant::now();
    let mut stats = SolveStats::default();

    let options: Vec<Vec<(NodeId, Mode)>> = scenario
        .tasks
        .iter()
        .map(|task| {
            scenario
                .nodes
                .iter()
                .filter(|node| covers(node, task))
                .flat_map(|node| [(node.id, Mode::Ps), (node.id, Mode::Vs)])
                .collect()
        })
        .collect();

    let mut best: Option<(Nanojoules, AssignmentPlan)> = None;
    if options.iter().all(|o| !o.is_empty()) {
        let mut digits = vec![0usize; n_tasks];
        loop {
            stats.nodes_explored += 1;
            let assignments = digits
                .iter()
                .enumerate()
                .map(|(task, &d)| {
                    let (node, mode) = options[task][d];
                    Assignment { task, node, mode }
                })
                .collect();
            let plan = AssignmentPlan::from_assignments(assignments);
            if validate_plan(&plan, scenario).is_ok() {
                let total = plan_cost(&plan, scenario)
                    .expect("validated plan has known ids")
                    .total;
                if best.as_ref().is_none_or(|(b, _)| total < *b) {
                    best = Some((total, plan));
                }
            }
            // Odometer with the last task as the fastest-moving digit.
            let mut pos = n_tasks;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < options[pos].len() {
                    break;
                }
                digits[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX || n_tasks == 0 {
                break;
            }
        }
    }

    stats.wall_time = start.elapsed();
    Ok(match best {
        Some((_, plan)) => SolveResult::with_plan(Status::Optimal, plan, scenario, stats),
        None => SolveResult::infeasible(stats),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::tests::scenario;

    const BIG: u64 = 3_000_000_000;

    #[test]
    fn two_tasks_on_one_node_share_it() {
        let s = scenario(&[(10.0, 10.0, BIG)], &[(11.0, 11.0), (11.0, 9.0)]);
        let r = brute_force(&s).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert_eq!(r.total(), Some(Nanojoules(20_400)));
        let plan = r.plan.unwrap();
        assert!(plan.assignments.iter().all(|a| a.mode == Mode::Vs));
        // 2 tasks x 2 options each.
        assert_eq!(r.stats.nodes_explored, 4);
    }

    #[test]
    fn lone_task_prefers_physical() {
        let s = scenario(&[(10.0, 10.0, BIG)], &[(11.0, 11.0)]);
        let r = brute_force(&s).unwrap();
        assert_eq!(r.total(), Some(Nanojoules(17_000)));
        assert_eq!(r.plan.unwrap().assignments[0].mode, Mode::Ps);
    }

    #[test]
    fn uncovered_task_is_infeasible() {
        let s = scenario(&[(10.0, 10.0, BIG)], &[(100.0, 100.0)]);
        assert!(brute_force(&s).unwrap().is_infeasible());
    }

    #[test]
    fn no_tasks_is_the_empty_plan() {
        let s = scenario(&[(10.0, 10.0, BIG)], &[]);
        let r = brute_force(&s).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert_eq!(r.total(), Some(Nanojoules(0)));
        assert_eq!(r.plan.unwrap(), AssignmentPlan::default());
    }

    #[test]
    fn ties_break_lexicographically() {
        // Two identical nodes, one task: (node 0, PS) is the smallest vector.
        let s = scenario(&[(10.0, 10.0, BIG), (10.0, 10.0, BIG)], &[(11.0, 11.0)]);
        let plan = brute_force(&s).unwrap().plan.unwrap();
        assert_eq!(
            plan.assignments,
            vec![Assignment {
                task: 0,
                node: 0,
                mode: Mode::Ps
            }]
        );
    }

    #[test]
    fn refuses_oversized_instances() {
        let tasks: Vec<(f64, f64)> = (0..9).map(|k| (10.0 + k as f64, 10.0)).collect();
        let s = scenario(&[(10.0, 10.0, BIG)], &tasks);
        assert_eq!(
            brute_force(&s).unwrap_err(),
            SolveError::TooLarge { tasks: 9, cap: 8 }
        );
        assert!(brute_force_with_cap(&s, 9).is_ok());
    }
}
