//! Shared independent oracles for the integration and acceptance suites.

use railshunt::yard::{Destination, YardInstance};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

type OracleState = Vec<Vec<String>>;

fn oracle_final(state: &OracleState, instance: &YardInstance) -> bool {
    state.iter().enumerate().all(|(track, seq)| {
        seq.iter().all(|id| {
            let g = instance.group(id).unwrap();
            match g.destination {
                Destination::Fixed(d) => track == d,
                Destination::AnyClassification => instance.is_classification(track),
            }
        })
    })
}

/// Minimum plan cost by plain uniform-cost search over raw states applied by
/// naive list splicing; sorted states are not collapsed.
pub fn ucs_min_cost(instance: &YardInstance) -> Option<f64> {
    let k = instance.num_tracks();
    let start: OracleState = (0..k)
        .map(|t| instance.initial.track(t).to_vec())
        .collect();
    let mut best: HashMap<OracleState, f64> = HashMap::new();
    let mut heap: BinaryHeap<Reverse<(u64, OracleState)>> = BinaryHeap::new();
    best.insert(start.clone(), 0.0);
    heap.push(Reverse((0u64, start)));
    while let Some(Reverse((bits, state))) = heap.pop() {
        let cost = f64::from_bits(bits);
        if best.get(&state).copied().unwrap_or(f64::INFINITY) < cost {
            continue;
        }
        if oracle_final(&state, instance) {
            return Some(cost);
        }
        for src in 0..k {
            for dst in 0..k {
                if src == dst || state[src].is_empty() {
                    continue;
                }
                let step = cost + instance.cost[src][dst];
                for count in 1..=state[src].len() {
                    let mut next = state.clone();
                    let cut = next[src].len() - count;
                    let tail: Vec<String> = next[src].drain(cut..).collect();
                    next[dst].extend(tail);
                    let load: f64 = next[dst]
                        .iter()
                        .map(|id| instance.group(id).unwrap().length)
                        .sum();
                    if load > instance.tracks[dst].capacity + 1e-9 {
                        break;
                    }
                    if best.get(&next).copied().unwrap_or(f64::INFINITY) > step {
                        best.insert(next.clone(), step);
                        heap.push(Reverse((step.to_bits(), next)));
                    }
                }
            }
        }
    }
    None
}

/// All permutations of `1..=n`.
pub fn permutations(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n);
            out.push(q);
        }
    }
    out
}
