use railshunt::argdp::*;
use railshunt::generator::*;
use std::time::Instant;

fn main() {
    let seed = 77_103u64;
    let params = GeneratorParams::default().mixed(true).min_classification(2);
    let inst = gaia(&params, seed);
    let t0 = Instant::now();
    match solve_argdp(&inst, &ArgdpConfig { max_states: 12_000_000, ..ArgdpConfig::default() }) {
        Ok(sol) => println!(
            "seed {seed}: cost {} v_hat {} edges {} in {:?}",
            sol.stats.total_cost, sol.stats.reduced_vertices, sol.stats.reduced_edges, t0.elapsed()
        ),
        Err(e) => println!("seed {seed}: {e} in {:?}", t0.elapsed()),
    }
}
