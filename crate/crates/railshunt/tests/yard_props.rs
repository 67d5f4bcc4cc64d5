//! Property tests for move semantics and serialization.

use proptest::prelude::*;
use railshunt::argdp::merge_canonical;
use railshunt::yard::{
    apply_move, build_instance, legal_moves, CarGroup, Destination, Plan, ShuntMove, TrackKind,
    YardInstance, YardState,
};
use std::collections::BTreeMap;

/// Random instance: 2-4 departure tracks, 2-4 classification tracks, up to
/// seven unit-length groups scattered over the classification tracks.
fn arb_instance() -> impl Strategy<Value = YardInstance> {
    (2usize..=4, 2usize..=4, 1usize..=7).prop_flat_map(|(kd, kc, g)| {
        let k = kd + kc;
        let dests = proptest::collection::vec(proptest::option::of(0..kd), g);
        let placement = proptest::collection::vec((kd..k, 0usize..=6), g);
        (Just((kd, kc)), dests, placement).prop_map(move |((kd, _kc), dests, placement)| {
            let kinds: Vec<TrackKind> = (0..k)
                .map(|i| {
                    if i < kd {
                        TrackKind::Departure
                    } else {
                        TrackKind::Classification
                    }
                })
                .collect();
            let groups: Vec<CarGroup> = dests
                .iter()
                .enumerate()
                .map(|(i, d)| CarGroup {
                    id: format!("g{i}"),
                    length: 1.0,
                    destination: match d {
                        Some(t) => Destination::Fixed(*t),
                        None => Destination::AnyClassification,
                    },
                })
                .collect();
            let mut initial = YardState::new(k);
            for (i, &(track, pos)) in placement.iter().enumerate() {
                let seq = initial.track_mut(track);
                let at = pos.min(seq.len());
                seq.insert(at, format!("g{i}"));
            }
            build_instance(&kinds, g as f64, groups, initial)
        })
    })
}

fn multiset(state: &YardState) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for (_, seq) in state.iter() {
        for id in seq {
            *out.entry(id.clone()).or_insert(0) += 1;
        }
    }
    out
}

proptest! {
    /// Moved groups keep their order; everything matches a naive splice.
    #[test]
    fn order_preservation_against_naive_splice(inst in arb_instance(), pick in any::<u64>()) {
        let moves = legal_moves(&inst.initial, &inst);
        prop_assume!(!moves.is_empty());
        let mv = moves[(pick % moves.len() as u64) as usize];
        let next = apply_move(&inst.initial, mv, &inst).unwrap();

        let mut naive: Vec<Vec<String>> = (0..inst.num_tracks())
            .map(|t| inst.initial.track(t).to_vec())
            .collect();
        let cut = naive[mv.src].len() - mv.count;
        let tail: Vec<String> = naive[mv.src].split_off(cut);
        naive[mv.dst].extend(tail);
        for (t, seq) in naive.iter().enumerate() {
            prop_assert_eq!(next.track(t), seq.as_slice());
        }
        prop_assert_eq!(multiset(&inst.initial), multiset(&next));
    }

    /// Each moved group's 1-based position changes by exactly
    /// `N_dst - N_src + count`.
    #[test]
    fn position_change_algebra(inst in arb_instance(), pick in any::<u64>()) {
        let moves = legal_moves(&inst.initial, &inst);
        prop_assume!(!moves.is_empty());
        let mv = moves[(pick % moves.len() as u64) as usize];
        let n_src = inst.initial.track(mv.src).len() as i64;
        let n_dst = inst.initial.track(mv.dst).len() as i64;
        let next = apply_move(&inst.initial, mv, &inst).unwrap();
        let moved = &inst.initial.track(mv.src)[inst.initial.track(mv.src).len() - mv.count..];
        for id in moved {
            let before = inst.initial.track(mv.src).iter().position(|g| g == id).unwrap() as i64 + 1;
            let after = next.track(mv.dst).iter().position(|g| g == id).unwrap() as i64 + 1;
            prop_assert_eq!(after - before, n_dst - n_src + mv.count as i64);
        }
        // Unmoved groups keep their positions.
        for (t, seq) in inst.initial.iter() {
            for (pos, id) in seq.iter().enumerate() {
                if moved.contains(id) {
                    continue;
                }
                let now = next.track(t).iter().position(|g| g == id);
                prop_assert_eq!(now, Some(pos));
            }
        }
    }

    /// Applying a move and its inverse restores the state.
    #[test]
    fn reversibility(inst in arb_instance(), pick in any::<u64>()) {
        let moves = legal_moves(&inst.initial, &inst);
        prop_assume!(!moves.is_empty());
        let mv = moves[(pick % moves.len() as u64) as usize];
        let there = apply_move(&inst.initial, mv, &inst).unwrap();
        let back = ShuntMove { src: mv.dst, dst: mv.src, count: mv.count };
        if let Ok(again) = apply_move(&there, back, &inst) {
            prop_assert_eq!(again, inst.initial.clone());
        }
    }

    /// Merging is idempotent and conserves total length.
    #[test]
    fn merge_canonical_idempotent(inst in arb_instance()) {
        let (m1, t1) = merge_canonical(&inst.initial, &inst.groups);
        let (m2, t2) = merge_canonical(&m1, &t1);
        prop_assert_eq!(&m1, &m2);
        let total: f64 = inst.groups.iter().map(|g| g.length).sum();
        let merged_total: f64 = m1
            .iter()
            .flat_map(|(_, seq)| seq.iter())
            .map(|id| t1.iter().find(|g| &g.id == id).unwrap().length)
            .sum();
        prop_assert!((total - merged_total).abs() < 1e-9);
    }

    /// Instance and plan files survive a JSON round trip.
    #[test]
    fn file_round_trips(inst in arb_instance(), moves in proptest::collection::vec((0usize..6, 0usize..6, 1usize..4), 0..5)) {
        let text = serde_json::to_string(&inst).unwrap();
        let back: YardInstance = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&inst, &back);

        let plan = Plan {
            moves: moves
                .into_iter()
                .map(|(src, dst, count)| ShuntMove { src, dst, count })
                .collect(),
            total_cost: 12.5,
        };
        let text = serde_json::to_string(&plan).unwrap();
        let back: Plan = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(plan, back);
    }
}

/// Finality is not absorbing at the state level: a legal move can leave a
/// final state.
#[test]
fn finality_is_not_absorbing() {
    use railshunt::yard::is_final;
    let inst = build_instance(
        &[TrackKind::Departure, TrackKind::Classification, TrackKind::Classification],
        5.0,
        vec![CarGroup {
            id: "n".into(),
            length: 1.0,
            destination: Destination::AnyClassification,
        }],
        {
            let mut s = YardState::new(3);
            s.track_mut(1).push("n".into());
            s
        },
    );
    assert!(is_final(&inst.initial, &inst));
    // Moving the free group onto the departure track leaves finality.
    let out = apply_move(
        &inst.initial,
        ShuntMove {
            src: 1,
            dst: 0,
            count: 1,
        },
        &inst,
    )
    .unwrap();
    assert!(!is_final(&out, &inst));
}
