//! Certificate instances: the optimal shunting cost equals n*R exactly when
//! the sequence admits a zero-shuffle batch sort.

use railshunt::exact::{solve_exact, ExactConfig};
use railshunt::stacksort::build_rspsc_instance;

fn main() {
    for sequence in [
        vec![1u32, 2, 3, 4, 5],
        vec![5, 4, 3, 2, 1],
        vec![3, 1, 5, 2, 4],
    ] {
        let instance = build_rspsc_instance(&sequence, 4, 6.0, 1.0).unwrap();
        let solution = solve_exact(&instance, &ExactConfig::default()).unwrap();
        println!(
            "{sequence:?}: optimal cost {} (n*R = {}), {} moves",
            solution.plan.total_cost,
            sequence.len(),
            solution.plan.moves.len()
        );
    }
}
