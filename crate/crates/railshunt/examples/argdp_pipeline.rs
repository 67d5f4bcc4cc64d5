//! Run the adaptive-grouping heuristic against the exact solver on a seeded
//! random instance and report the gap and the state-space reduction.

use railshunt::argdp::{solve_argdp, ArgdpConfig};
use railshunt::exact::{solve_exact, ExactConfig};
use railshunt::generator::{generate, GeneratorParams};

fn main() {
    let params = GeneratorParams::default().mixed(true).min_classification(2);
    let instance = generate(&params, 4242);
    println!(
        "instance: {} tracks ({} departure), {} groups",
        instance.num_tracks(),
        instance.departure_tracks().count(),
        instance.groups.len()
    );

    let heuristic = solve_argdp(&instance, &ArgdpConfig::default()).expect("pipeline");
    println!("heuristic cost: {}", heuristic.stats.total_cost);
    println!(
        "  preprocessing {} + path {}",
        heuristic.stats.preprocessing_cost, heuristic.stats.path_cost
    );
    println!(
        "  reduced graph: {} vertices / {} edges (full space {} states, {:.4}% reduction)",
        heuristic.stats.reduced_vertices,
        heuristic.stats.reduced_edges,
        heuristic.stats.full_states,
        heuristic.stats.reduction_percent
    );

    let exact = solve_exact(&instance, &ExactConfig::default()).expect("solvable");
    println!("optimal cost: {}", exact.plan.total_cost);
    let gap = if exact.plan.total_cost > 0.0 {
        (heuristic.stats.total_cost - exact.plan.total_cost) / exact.plan.total_cost * 100.0
    } else {
        0.0
    };
    println!("gap: {gap:.2}%");
}
