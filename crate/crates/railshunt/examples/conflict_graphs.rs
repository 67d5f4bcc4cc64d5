//! Conflict graphs of a sequence under single-item moves and batch moves.

use railshunt::stacksort::{rspsc_conflicts, zsss_conflicts, DigitSequence};

fn main() {
    let sequence = [2u32, 4, 3, 6, 1, 8, 7, 5];
    println!("sequence: {sequence:?}");

    let single = zsss_conflicts(&sequence);
    println!("single-move conflicts ({}):", single.edges.len());
    for (a, b) in &single.edges {
        println!("  {a} -- {b}");
    }

    let batch = rspsc_conflicts(&DigitSequence::from_values(&sequence));
    println!("batch-move conflicts ({}):", batch.edges.len());
    for (a, b) in &batch.edges {
        println!("  {a} -- {b}");
    }
}
