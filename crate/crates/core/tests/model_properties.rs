mod common;

use common::*;
use proptest::prelude::*;
use vsnopt_core::model::*;

fn scenario_and_plan() -> impl Strategy<Value = (Scenario, AssignmentPlan)> {
    micro_scenario(4, 4).prop_flat_map(|s| {
        let plans = prop_oneof![random_plan(&s), covering_plan(&s)];
        (Just(s), plans)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn validators_agree((s, plan) in scenario_and_plan()) {
        prop_assert_eq!(validate_plan(&plan, &s).is_ok(), naive_is_valid(&plan, &s));
    }
}

proptest! {
    #[test]
    fn cost_decomposes_over_nodes((s, plan) in scenario_and_plan()) {
        let Ok(cost) = plan_cost(&plan, &s) else { return Ok(()) };
        let total = cost.total;
        let per_node: Nanojoules = (0..s.nodes.len())
            .map(|i| node_energy_use(&plan, i, &s).unwrap())
            .sum();
        prop_assert_eq!(total, per_node);
    }

    #[test]
    fn breakdown_sums((s, plan) in scenario_and_plan()) {
        if let Ok(c) = plan_cost(&plan, &s) {
            prop_assert_eq!(c.total, c.c_ps + c.c_vs);
        }
    }

    #[test]
    fn energy_scaling((s, plan) in scenario_and_plan(), k in prop::sample::select(vec![2u64, 10, 1000])) {
        let scaled = s.scaled_energy(k);
        prop_assert_eq!(
            validate_plan(&plan, &s).is_ok(),
            validate_plan(&plan, &scaled).is_ok()
        );
        if let Ok(c) = plan_cost(&plan, &s) {
            prop_assert_eq!(plan_cost(&plan, &scaled).unwrap().total, c.total * k);
        }
    }

    #[test]
    fn cost_ignores_record_order((s, plan) in scenario_and_plan(), rot in 0usize..8) {
        let mut shuffled = plan.clone();
        shuffled.assignments.reverse();
        if !shuffled.assignments.is_empty() {
            let r = rot % shuffled.assignments.len();
            shuffled.assignments.rotate_left(r);
        }
        prop_assert_eq!(plan_cost(&plan, &s).ok(), plan_cost(&shuffled, &s).ok());
        prop_assert_eq!(
            validate_plan(&plan, &s).is_ok(),
            validate_plan(&shuffled, &s).is_ok()
        );
    }
}
