//! A small benchmark suite: exact solver vs the heuristic on seeded
//! instances, with per-plan model checks and aggregate statistics.

use railshunt::bench::{run_suite, to_table, SuiteSpec};

fn main() {
    let spec = SuiteSpec {
        mixed: 4,
        non_mixed: 4,
        seed: 1000,
        exact_max_states: 500_000,
        ..SuiteSpec::default()
    };
    let report = run_suite(&spec);
    print!("{}", to_table(&report));
}
