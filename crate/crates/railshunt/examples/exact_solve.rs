//! Solve a small yard to optimality and print the plan.
//!
//! Two departure tracks, three classification tracks, four groups scattered
//! so that a naive one-group-at-a-time plan is beatable by batch moves.

use railshunt::exact::{solve_exact, ExactConfig};
use railshunt::yard::{build_instance, CarGroup, Destination, TrackKind::*, YardState};

fn main() {
    let groups = vec![
        CarGroup {
            id: "coal".into(),
            length: 1.0,
            destination: Destination::Fixed(0),
        },
        CarGroup {
            id: "grain".into(),
            length: 1.0,
            destination: Destination::Fixed(1),
        },
        CarGroup {
            id: "coal2".into(),
            length: 1.0,
            destination: Destination::Fixed(0),
        },
        CarGroup {
            id: "spare".into(),
            length: 1.0,
            destination: Destination::AnyClassification,
        },
    ];
    let mut initial = YardState::new(5);
    initial
        .track_mut(2)
        .extend(["coal".to_string(), "spare".to_string(), "grain".to_string()]);
    initial.track_mut(3).push("coal2".to_string());
    let instance = build_instance(
        &[Departure, Departure, Classification, Classification, Classification],
        4.0,
        groups,
        initial,
    );

    let solution = solve_exact(&instance, &ExactConfig::default()).expect("solvable");
    println!("optimal cost: {}", solution.plan.total_cost);
    for (i, mv) in solution.plan.moves.iter().enumerate() {
        println!("  step {}: move {} group(s) from track {} to track {}",
            i + 1, mv.count, mv.src, mv.dst);
    }
    println!(
        "explored {} states ({} expanded)",
        solution.stats.states, solution.stats.expanded
    );
}
