#![allow(dead_code)]

use proptest::prelude::*;
use vsnopt_core::model::*;

pub const HUGE_BUDGET: u64 = 3_000_000_000;

/// Budgets that make the energy constraint bind at various points.
pub fn budget() -> impl Strategy<Value = u64> {
    prop_oneof![
        Just(HUGE_BUDGET),
        1_900_000_000u64..=3_400_000_000,
        Just(16_999u64),
        Just(17_000u64),
        Just(18_000u64),
        Just(20_400u64),
        Just(22_100u64),
        0u64..30_000,
    ]
}

/// Up to `max_nodes` nodes and `max_tasks` tasks in a 60 m square, range 30 m.
pub fn micro_scenario(max_nodes: usize, max_tasks: usize) -> impl Strategy<Value = Scenario> {
    let node = (0.0..=60.0f64, 0.0..=60.0f64, budget());
    let task = (0.0..=60.0f64, 0.0..=60.0f64);
    (
        prop::collection::vec(node, 1..=max_nodes),
        prop::collection::vec(task, 0..=max_tasks),
    )
        .prop_map(|(nodes, tasks)| {
            Scenario::new(
                Area::new(60.0, 60.0),
                nodes
                    .into_iter()
                    .enumerate()
                    .map(|(id, (x, y, b))| SensorNode {
                        id,
                        pos: Point::new(x, y),
                        budget: Nanojoules(b),
                        range: 30.0,
                    })
                    .collect(),
                tasks
                    .into_iter()
                    .enumerate()
                    .map(|(id, (x, y))| SensingTask {
                        id,
                        pos: Point::new(x, y),
                    })
                    .collect(),
                EnergyParams::default(),
                None,
            )
            .unwrap()
        })
}

/// Arbitrary, mostly invalid plans over a scenario: records may repeat,
/// miss tasks, point at unknown ids or mix modes.
pub fn random_plan(s: &Scenario) -> impl Strategy<Value = AssignmentPlan> {
    let n = s.nodes.len();
    let m = s.tasks.len();
    let record = (0..m + 1, 0..n + 1, any::<bool>()).prop_map(|(task, node, vs)| Assignment {
        task,
        node,
        mode: if vs { Mode::Vs } else { Mode::Ps },
    });
    (
        prop::collection::vec(record, 0..=m + 2),
        prop::collection::btree_set(0..n + 1, 0..=n),
    )
        .prop_map(|(assignments, virtualized)| AssignmentPlan::new(assignments, virtualized))
}

/// Plans that pick, for each task, a covering node and a mode, with the
/// virtualized set derived from the VS records. Valid more often.
pub fn covering_plan(s: &Scenario) -> impl Strategy<Value = AssignmentPlan> {
    let choices: Vec<Vec<(usize, Mode)>> = s
        .tasks
        .iter()
        .map(|t| {
            let mut c: Vec<(usize, Mode)> = s
                .nodes
                .iter()
                .filter(|n| covers(n, t))
                .flat_map(|n| [(n.id, Mode::Ps), (n.id, Mode::Vs)])
                .collect();
            if c.is_empty() {
                c.push((0, Mode::Ps));
            }
            c
        })
        .collect();
    let picks: Vec<_> = choices.into_iter().map(prop::sample::select).collect();
    picks.prop_map(|picks| {
        AssignmentPlan::from_assignments(
            picks
                .into_iter()
                .enumerate()
                .map(|(task, (node, mode))| Assignment { task, node, mode })
                .collect(),
        )
    })
}

/// Literal per-task / per-node restatement of the model constraints over
/// indicator counts. Written independently of `validate_plan`.
pub fn naive_is_valid(plan: &AssignmentPlan, s: &Scenario) -> bool {
    let n = s.nodes.len();
    let m = s.tasks.len();
    if plan.assignments.iter().any(|a| a.node >= n || a.task >= m)
        || plan.virtualized.iter().any(|&i| i >= n)
    {
        return false;
    }
    let mut x = vec![vec![0u64; m]; n];
    let mut z = vec![vec![0u64; m]; n];
    for a in &plan.assignments {
        match a.mode {
            Mode::Ps => x[a.node][a.task] += 1,
            Mode::Vs => z[a.node][a.task] += 1,
        }
    }
    let l = |i: usize, j: usize| -> u64 {
        let d = ((s.nodes[i].pos.x - s.tasks[j].pos.x).powi(2)
            + (s.nodes[i].pos.y - s.tasks[j].pos.y).powi(2))
        .sqrt();
        u64::from(d <= s.nodes[i].range)
    };
    let y = |i: usize| u64::from(plan.virtualized.contains(&i));
    let (e_ps, e_vs, max_vs) = (s.params.e_ps.0, s.params.e_vs.0, s.params.max_vs as u64);

    for j in 0..m {
        let all: u64 = (0..n).map(|i| x[i][j] + z[i][j]).sum();
        let covered: u64 = (0..n).map(|i| l(i, j) * (x[i][j] + z[i][j])).sum();
        if all != 1 || covered != 1 {
            return false;
        }
    }
    for i in 0..n {
        let ps: u64 = x[i].iter().sum();
        let vs: u64 = z[i].iter().sum();
        if ps > 1 - y(i) {
            return false;
        }
        if vs > max_vs * y(i) {
            return false;
        }
        if e_ps * ps + e_ps * y(i) + e_vs * vs > s.nodes[i].budget.0 {
            return false;
        }
    }
    true
}
