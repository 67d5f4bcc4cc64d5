//! Seeded instance generation: random layouts and the fixed 14-track yard.

use railshunt::generator::{gaia, generate, GeneratorParams};

fn main() {
    let random = generate(&GeneratorParams::default().mixed(true), 1);
    println!(
        "random: {} tracks ({} departure), {} groups ({} free)",
        random.num_tracks(),
        random.departure_tracks().count(),
        random.groups.len(),
        random.groups.iter().filter(|g| !g.is_destined()).count()
    );

    let fixed = gaia(&GeneratorParams::default(), 1);
    println!(
        "fixed yard: {} tracks ({} departure / {} classification), {} groups",
        fixed.num_tracks(),
        fixed.departure_tracks().count(),
        fixed.classification_tracks().count(),
        fixed.groups.len()
    );
    let out = std::env::temp_dir().join("railshunt_instance.json");
    std::fs::write(&out, serde_json::to_string_pretty(&fixed).unwrap()).unwrap();
    println!("wrote {}", out.display());
}
