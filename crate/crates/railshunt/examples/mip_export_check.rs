//! Build the time-indexed model for an instance, export it as MPS text, and
//! verify an optimal plan row by row.

use railshunt::exact::{solve_exact, ExactConfig};
use railshunt::generator::{generate, GeneratorParams};
use railshunt::horizon::{compute_horizon, DEFAULT_DELTA};
use railshunt::mip::{build_mip, check_feasibility, export_mps, plan_to_assignment};

fn main() {
    let params = GeneratorParams::default().min_classification(2);
    let instance = generate(&params, 99);
    let horizon = compute_horizon(&instance, DEFAULT_DELTA).unwrap().t;
    let model = build_mip(&instance, horizon).unwrap();
    let mps = export_mps(&model);
    println!(
        "model: {} variables over {} periods, {} MPS lines",
        model.var_count(),
        model.horizon,
        mps.lines().count()
    );
    let out = std::env::temp_dir().join("railshunt_model.mps");
    std::fs::write(&out, &mps).unwrap();
    println!("wrote {}", out.display());

    let plan = solve_exact(&instance, &ExactConfig::default()).unwrap().plan;
    let (model, assignment) =
        plan_to_assignment(&instance, &plan, horizon.max(plan.moves.len())).unwrap();
    let report = check_feasibility(&model, &assignment);
    println!(
        "optimal plan with {} moves: feasible = {}, objective = {}",
        plan.moves.len(),
        report.feasible,
        report.objective
    );
}
