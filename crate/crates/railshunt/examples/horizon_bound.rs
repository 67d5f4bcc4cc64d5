//! Compute the constructive upper bound T on the number of periods the
//! time-indexed model needs, together with the certifying plan.

use railshunt::generator::{generate, GeneratorParams};
use railshunt::horizon::{compute_horizon, DEFAULT_DELTA};
use railshunt::yard::{is_final, replay_plan};

fn main() {
    let params = GeneratorParams::default().mixed(true).min_classification(2);
    let instance = generate(&params, 7);
    let result = compute_horizon(&instance, DEFAULT_DELTA).expect("two classification tracks");
    println!("T = {} periods", result.t);
    for (i, mv) in result.plan.moves.iter().enumerate() {
        println!("  period {:>2}: {mv}", i + 1);
    }
    let end = replay_plan(&instance, &result.plan, false).expect("legal");
    println!("certificate plan is final: {}", is_final(&end, &instance));
    println!("certificate plan cost: {}", result.plan.total_cost);
}
