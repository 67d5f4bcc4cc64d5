//! Rewrite a sequence so its batch-move conflict graph mirrors the
//! single-move conflict graph of the original, then verify the bijection.

use railshunt::stacksort::{
    rspsc_conflicts, transform_zsss_to_rspsc, zsss_conflicts, Provenance,
};

fn main() {
    let input = [2u32, 4, 3, 6, 1, 8, 7, 5];
    let result = transform_zsss_to_rspsc(&input).unwrap();
    let rendered: Vec<String> = result
        .sequence
        .items
        .iter()
        .map(|it| match it.provenance {
            Provenance::Original => it.value.to_string(),
            Provenance::SetV => format!("{}*", it.value),
            Provenance::Dummy => format!("{}+", it.value),
        })
        .collect();
    println!("input:       {input:?}");
    println!("transformed: [{}]   (* gap filler, + witness)", rendered.join(" "));

    let before = zsss_conflicts(&input);
    let after = rspsc_conflicts(&result.sequence);
    println!("single-move conflicts: {}", before.edges.len());
    println!("batch-move conflicts after transform: {}", after.edges.len());
    for (a, b) in &before.edges {
        let (ma, mb) = (result.value_map[a], result.value_map[b]);
        let mapped = (ma.min(mb), ma.max(mb));
        println!("  {a}--{b}  ->  {}--{}  present: {}", mapped.0, mapped.1, after.edges.contains(&mapped));
    }
}
