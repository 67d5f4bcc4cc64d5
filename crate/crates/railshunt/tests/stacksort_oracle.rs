//! Semantic grounding of the batch-move conflict test: two items conflict
//! exactly when no shuffle-free schedule lets them share one sorting stack.
//!
//! The oracle searches over all batch-move schedules directly. Moves pull a
//! prefix of the source onto a sorting stack or the sink, or a top slice of
//! a sorting stack onto the sink; under the zero-shuffle rule an item never
//! enters a second sorting stack, so stack-to-stack moves are excluded. The
//! sink accepts a batch only when it extends the sorted pile by consecutive
//! values.

use railshunt::stacksort::{rspsc_conflicts, DigitSequence};
use std::collections::HashSet;

#[derive(Clone, PartialEq, Eq, Hash)]
struct SearchState {
    /// Next source position to pop.
    popped: usize,
    /// Next value the sink accepts.
    need: u32,
    /// The designated shared stack, bottom first.
    shared: Vec<u32>,
    /// Other sorting stacks, bottom first, as a sorted multiset.
    others: Vec<Vec<u32>>,
    a_used_shared: bool,
    b_used_shared: bool,
}

/// Does a zero-shuffle schedule exist in which both `a` and `b` enter the
/// shared stack at some point?
fn can_share(seq: &[u32], a: u32, b: u32) -> bool {
    let n = seq.len();
    let start = SearchState {
        popped: 0,
        need: 1,
        shared: Vec::new(),
        others: Vec::new(),
        a_used_shared: false,
        b_used_shared: false,
    };
    let mut seen = HashSet::new();
    let mut stack = vec![start];
    while let Some(state) = stack.pop() {
        if !seen.insert(state.clone()) {
            continue;
        }
        if state.popped == n && state.need as usize == n + 1 {
            if state.a_used_shared && state.b_used_shared {
                return true;
            }
            continue;
        }
        // Batches off the source.
        for count in 1..=n - state.popped {
            let batch = &seq[state.popped..state.popped + count];
            // Onto the shared stack.
            {
                let mut next = state.clone();
                next.popped += count;
                // A batch lands with its first (topmost) item on top; bottom
                // first means the batch is appended reversed.
                next.shared.extend(batch.iter().rev());
                next.a_used_shared |= batch.contains(&a);
                next.b_used_shared |= batch.contains(&b);
                stack.push(next);
            }
            // Onto a fresh private stack (a and b must not waste their one
            // stack visit there).
            if !batch.contains(&a) && !batch.contains(&b) {
                let mut next = state.clone();
                next.popped += count;
                let pile: Vec<u32> = batch.iter().rev().copied().collect();
                next.others.push(pile);
                next.others.sort();
                stack.push(next);
            }
            // Straight to the sink: needs to be the run need+count-1 .. need
            // in pop order.
            let fits = batch
                .iter()
                .rev()
                .enumerate()
                .all(|(k, &v)| v == state.need + k as u32);
            if fits {
                let mut next = state.clone();
                next.popped += count;
                next.need += count as u32;
                stack.push(next);
            }
        }
        // Top slices of sorting stacks onto the sink.
        let mut candidates: Vec<(Option<usize>, &Vec<u32>)> =
            vec![(None, &state.shared)];
        for (i, pile) in state.others.iter().enumerate() {
            candidates.push((Some(i), pile));
        }
        for (which, pile) in candidates {
            for count in 1..=pile.len() {
                let slice = &pile[pile.len() - count..];
                let fits = slice
                    .iter()
                    .enumerate()
                    .all(|(k, &v)| v == state.need + k as u32);
                if !fits {
                    continue;
                }
                let mut next = state.clone();
                match which {
                    None => {
                        next.shared.truncate(pile.len() - count);
                    }
                    Some(i) => {
                        next.others[i].truncate(pile.len() - count);
                        if next.others[i].is_empty() {
                            next.others.remove(i);
                        }
                        next.others.sort();
                    }
                }
                next.need += count as u32;
                stack.push(next);
            }
        }
    }
    false
}

fn permutations(n: u32) -> Vec<Vec<u32>> {
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

#[test]
fn conflict_test_matches_schedule_search() {
    // Exhaustive up to n = 4, then a deterministic sample of the 5-item
    // permutations to keep the oracle affordable.
    for n in 2..=4u32 {
        for perm in permutations(n) {
            check_perm(&perm);
        }
    }
    for (idx, perm) in permutations(5).into_iter().enumerate() {
        if idx % 4 == 0 {
            check_perm(&perm);
        }
    }
}

fn check_perm(perm: &[u32]) {
    let graph = rspsc_conflicts(&DigitSequence::from_values(perm));
    let n = perm.len() as u32;
    for a in 1..=n {
        for b in a + 1..=n {
            let predicted_conflict = graph.edges.contains(&(a, b));
            let shareable = can_share(perm, a, b);
            assert_eq!(
                predicted_conflict, !shareable,
                "{perm:?}: pair ({a},{b}) predicted {predicted_conflict}, oracle shareable {shareable}"
            );
        }
    }
}
