//! Checks the closed-form state count against exhaustive enumeration of all
//! arrangements for every small parameter combination: track splits,
//! free-group counts and per-departure distributions.

use num_bigint::BigUint;
use railshunt::counting::{count_states, StateCountParams};
use std::collections::HashSet;

/// Group tags: `None` = free group id slot, `Some(d)` = destined to
/// departure slot `d`. Groups are distinguishable, so each carries an index.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Arrangement(Vec<Vec<usize>>);

/// All distinct (assignment, per-track order) placements of `total` labeled
/// groups over `tracks` tracks, built by inserting one group at a time at
/// every track position.
fn enumerate_arrangements(total: usize, tracks: usize) -> HashSet<Arrangement> {
    let mut states = HashSet::new();
    states.insert(Arrangement(vec![Vec::new(); tracks]));
    for group in 0..total {
        let mut next = HashSet::new();
        for st in &states {
            for track in 0..tracks {
                for pos in 0..=st.0[track].len() {
                    let mut s = st.clone();
                    s.0[track].insert(pos, group);
                    next.insert(s);
                }
            }
        }
        states = next;
    }
    states
}

/// Counts distinct states after collapsing every sorted arrangement into
/// one. Groups `0..free` are free; group `free + d_offset` blocks belong to
/// departure slots in order. Tracks `0..departures` are the departure
/// tracks, the rest are classification.
fn enumerate_states(
    free: usize,
    per_departure: &[usize],
    tracks: usize,
    classification: usize,
) -> u64 {
    let departures = tracks - classification;
    assert_eq!(per_departure.len(), departures);
    let total = free + per_departure.iter().sum::<usize>();
    let dest_of = |group: usize| -> Option<usize> {
        if group < free {
            return None;
        }
        let mut rest = group - free;
        for (d, &n) in per_departure.iter().enumerate() {
            if rest < n {
                return Some(d);
            }
            rest -= n;
        }
        unreachable!()
    };
    let is_sorted = |st: &Arrangement| -> bool {
        st.0.iter().enumerate().all(|(track, seq)| {
            seq.iter().all(|&g| match dest_of(g) {
                Some(d) => track == d,
                None => track >= departures,
            })
        })
    };
    let all = enumerate_arrangements(total, tracks);
    let sorted = all.iter().filter(|st| is_sorted(st)).count() as u64;
    let total_count = all.len() as u64;
    // All sorted arrangements collapse into a single state.
    total_count - sorted + u64::from(sorted > 0)
}

#[test]
fn formula_matches_enumeration_for_all_small_splits() {
    let mut checked = 0;
    for tracks in 1..=4usize {
        for classification in 1..=tracks {
            let departures = tracks - classification;
            for total in 0..=4usize {
                for free in 0..=total {
                    let destined = total - free;
                    for split in compositions(destined, departures) {
                        let expected = enumerate_states(free, &split, tracks, classification);
                        let params = StateCountParams {
                            total_groups: total as u64,
                            free_groups: free as u64,
                            tracks: tracks as u64,
                            classification_tracks: classification as u64,
                            n_per_departure: split.iter().map(|&x| x as u64).collect(),
                        };
                        let got = count_states(&params).unwrap();
                        assert_eq!(
                            got,
                            BigUint::from(expected),
                            "tracks {tracks} classification {classification} free {free} split {split:?}"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 100, "checked only {checked} combinations");
}

/// All ways to write `n` as an ordered sum of `parts` nonnegative integers.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![vec![]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
