//! Zero-shuffle sortability analysis.
//!
//! A sequence of distinct numbers sits on a source stack and must reach the
//! sink in increasing order using auxiliary sorting stacks; a *shuffle*
//! happens when some item enters more than one sorting stack. Two items
//! *conflict* when no shuffle-free schedule lets them share a sorting stack.
//! Two flavors are implemented: one-item-at-a-time moves, where a conflict
//! between `a` before `b` needs `b > a` and some value below `a` still
//! buried when `b` arrives; and batch moves, where pulling several adjacent
//! items at once weakens conflicts to the four conditions checked in
//! [`rspsc_conflicts`] (built on *consecutive decreasing subsequences*,
//! runs of positionally adjacent values stepping down by one).
//!
//! [`transform_zsss_to_rspsc`] rewrites a sequence so that the batch-move
//! conflict graph of the result mirrors the single-move conflict graph of
//! the input: value gaps filled by placeholder items absorb the
//! consecutive-value conflicts that batch moves cannot express, and dummy
//! items are inserted wherever a conflict still needs a positional witness.
//! [`build_rspsc_instance`] emits a yard instance whose cheapest plan costs
//! exactly `n * R` precisely when the sequence admits a zero-shuffle batch
//! sort.

use crate::yard::{
    CarGroup, Destination, TrackKind, TrackSegment, YardInstance, YardState,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Original,
    /// Gap-filling item introduced while separating consecutive values.
    SetV,
    /// Positional witness forcing a conflict to hold.
    Dummy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub value: u32,
    pub provenance: Provenance,
    /// For original items, the value they carried in the input sequence.
    pub original: Option<u32>,
}

/// A sequence of distinct values 1..=len with provenance per item. Written
/// order is pop order: the first item is at the top of the source stack.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSequence {
    pub items: Vec<Item>,
}

impl DigitSequence {
    pub fn from_values(values: &[u32]) -> Self {
        DigitSequence {
            items: values
                .iter()
                .map(|&v| Item {
                    value: v,
                    provenance: Provenance::Original,
                    original: Some(v),
                })
                .collect(),
        }
    }

    pub fn values(&self) -> Vec<u32> {
        self.items.iter().map(|it| it.value).collect()
    }

    pub fn is_permutation(&self) -> bool {
        let n = self.items.len() as u32;
        let set: BTreeSet<u32> = self.items.iter().map(|it| it.value).collect();
        set.len() == self.items.len() && set.iter().all(|&v| (1..=n).contains(&v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// One item per move.
    Zsss,
    /// Whole adjacent batches per move.
    RspSc,
}

/// Conflict graph over item values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    pub flavor: Flavor,
    /// Edges as value pairs `(low, high)`.
    pub edges: BTreeSet<(u32, u32)>,
}

impl ConflictGraph {
    pub fn degree(&self, value: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == value || b == value)
            .count()
    }
}

/// Single-move conflicts: `a` (earlier) conflicts with `b` (later) iff
/// `b > a` and some value smaller than `a` has not yet appeared when `b`
/// does.
pub fn zsss_conflicts(seq: &[u32]) -> ConflictGraph {
    let mut edges = BTreeSet::new();
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if zsss_conflict_at(seq, i, j) {
                edges.insert(ordered(seq[i], seq[j]));
            }
        }
    }
    ConflictGraph {
        flavor: Flavor::Zsss,
        edges,
    }
}

fn zsss_conflict_at(seq: &[u32], i: usize, j: usize) -> bool {
    let (a, b) = (seq[i], seq[j]);
    b > a && !all_smaller_before(seq, a, j)
}

/// Every value present in `seq` that is smaller than `a` occurs at a
/// position strictly before `j`.
fn all_smaller_before(seq: &[u32], a: u32, j: usize) -> bool {
    seq.iter()
        .enumerate()
        .all(|(pos, &v)| v >= a || pos < j)
}

/// Batch-move conflicts per the four-condition test: for positions `i < j`
/// with at least one item between them, values `a < b - 1`, some value
/// below `a` still missing before `b`, and neither the positional slice nor
/// the value range forming an increasing-start chain of consecutive
/// decreasing subsequences.
pub fn rspsc_conflicts(seq: &DigitSequence) -> ConflictGraph {
    let values = seq.values();
    let mut edges = BTreeSet::new();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if rspsc_conflict_at(&values, i, j) {
                edges.insert(ordered(values[i], values[j]));
            }
        }
    }
    ConflictGraph {
        flavor: Flavor::RspSc,
        edges,
    }
}

fn rspsc_conflict_at(values: &[u32], i: usize, j: usize) -> bool {
    let (a, b) = (values[i], values[j]);
    // (i) strictly separated values and positions.
    if j - i < 2 || a + 1 >= b {
        return false;
    }
    // (ii) some value below `a` is still missing before position `j`.
    if all_smaller_before(values, a, j) {
        return false;
    }
    // (iii) the positional slice does not unload shuffle-free in order.
    if cds_chain(&values[i..=j]) {
        return false;
    }
    // (iv) the value range cannot be stacked shuffle-free in reverse order.
    let mut range: Vec<(usize, u32)> = values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| (a..=b).contains(&v))
        .map(|(pos, &v)| (pos, v))
        .collect();
    range.sort_unstable_by_key(|&(pos, _)| pos);
    if cds_chain_positional(&range) {
        return false;
    }
    true
}

/// Whether a contiguous slice splits into maximal runs, each decreasing by
/// exactly one, whose leading values strictly increase.
pub fn cds_chain(slice: &[u32]) -> bool {
    let indexed: Vec<(usize, u32)> = slice.iter().copied().enumerate().collect();
    cds_chain_positional(&indexed)
}

/// Chain test for a value subset given with its positions in the host
/// sequence: a run continues only through positionally adjacent items.
fn cds_chain_positional(items: &[(usize, u32)]) -> bool {
    if items.is_empty() {
        return true;
    }
    let mut leads = vec![items[0].1];
    for w in items.windows(2) {
        let ((ppos, pval), (cpos, cval)) = (w[0], w[1]);
        let same_run = cpos == ppos + 1 && cval + 1 == pval;
        if !same_run {
            leads.push(cval);
        }
    }
    leads.windows(2).all(|w| w[0] < w[1])
}

fn ordered(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone)]
pub struct TransformResult {
    pub sequence: DigitSequence,
    /// Original value -> value in the transformed sequence.
    pub value_map: BTreeMap<u32, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("input must be a permutation of 1..=n")]
    NotAPermutation,
}

/// Rewrites a sequence so its batch-move conflict graph reproduces the
/// single-move conflict graph of the input, edge for edge, on the original
/// items, while every inserted item stays conflict-free.
pub fn transform_zsss_to_rspsc(input: &[u32]) -> Result<TransformResult, TransformError> {
    let seq = DigitSequence::from_values(input);
    if !seq.is_permutation() {
        return Err(TransformError::NotAPermutation);
    }
    let mut items = seq.items;

    // Separate conflicting consecutive values: shift the upper part of the
    // value range and remember the freed value for reinsertion.
    let mut freed: Vec<u32> = Vec::new();
    loop {
        let values: Vec<u32> = items.iter().map(|it| it.value).collect();
        let present: BTreeSet<u32> = values.iter().copied().collect();
        let pair = present
            .iter()
            .filter(|&&v| present.contains(&(v + 1)))
            .find(|&&v| {
                let i = values.iter().position(|&x| x == v).unwrap();
                let j = values.iter().position(|&x| x == v + 1).unwrap();
                i < j && zsss_conflict_at(&values, i, j)
            })
            .copied();
        let Some(v) = pair else { break };
        for it in &mut items {
            if it.value >= v + 1 {
                it.value += 1;
            }
        }
        freed.push(v + 1);
    }
    // Reinsert each freed value right after the last item not above it,
    // where it can never witness a missing smaller value.
    for v in freed {
        let pos = items
            .iter()
            .rposition(|it| it.value <= v)
            .map(|p| p + 1)
            .unwrap_or(0);
        items.insert(
            pos,
            Item {
                value: v,
                provenance: Provenance::SetV,
                original: None,
            },
        );
    }

    // Witness every remaining single-move conflict of the input: whenever
    // the transformed counterparts do not yet conflict under the batch-move
    // test, plant a dummy right before the later item.
    let n = input.len() as u32;
    for i in 0..input.len() {
        let a = input[i];
        for b in a + 2..=n {
            let Some(j) = input.iter().position(|&x| x == b) else {
                continue;
            };
            if j <= i || !zsss_conflict_at(input, i, j) {
                continue;
            }
            for _attempt in 0..4 {
                let values: Vec<u32> = items.iter().map(|it| it.value).collect();
                let pa = items
                    .iter()
                    .position(|it| it.original == Some(a))
                    .expect("original item");
                let pb = items
                    .iter()
                    .position(|it| it.original == Some(b))
                    .expect("original item");
                if rspsc_conflict_at(&values, pa, pb) {
                    break;
                }
                insert_dummy(&mut items, pb);
            }
        }
    }

    let value_map = items
        .iter()
        .filter_map(|it| it.original.map(|o| (o, it.value)))
        .collect();
    Ok(TransformResult {
        sequence: DigitSequence { items },
        value_map,
    })
}

/// Inserts a dummy at `pos`. Its value is one more than the number of
/// dummies to its left; every existing value from there on shifts up by
/// one, which keeps the values a permutation and the dummies numbered left
/// to right.
fn insert_dummy(items: &mut Vec<Item>, pos: usize) {
    let k = items[..pos]
        .iter()
        .filter(|it| it.provenance == Provenance::Dummy)
        .count() as u32
        + 1;
    for it in items.iter_mut() {
        if it.value >= k {
            it.value += 1;
        }
    }
    items.insert(
        pos,
        Item {
            value: k,
            provenance: Provenance::Dummy,
            original: None,
        },
    );
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RspscError {
    #[error("input must be a permutation of 1..=n")]
    NotAPermutation,
    #[error("need at least one sorting track")]
    NoSortingTracks,
    #[error("drop-off budget must stay below the shuffle cost (n*R = {total} >= c_bar = {c_bar})")]
    InvalidCosts { total: f64, c_bar: f64 },
}

/// Yard instance with the certificate cost structure: a source track `0`,
/// sorting tracks `1..=k`, an outbound track `k+1` and one departure track
/// per item, adjacent to the outbound track in drop-off order. Sorting
/// moves off the source and onto the outbound track are free, every
/// re-handling costs `c_bar`, and the `n` drop-off steps cost `r` each, so
/// an optimal plan costs `n * r` exactly when a zero-shuffle batch sort of
/// the sequence exists.
pub fn build_rspsc_instance(
    sequence: &[u32],
    sorting_tracks: usize,
    c_bar: f64,
    r: f64,
) -> Result<YardInstance, RspscError> {
    let seq = DigitSequence::from_values(sequence);
    if !seq.is_permutation() {
        return Err(RspscError::NotAPermutation);
    }
    if sorting_tracks == 0 {
        return Err(RspscError::NoSortingTracks);
    }
    let n = sequence.len();
    let total = n as f64 * r;
    if total >= c_bar {
        return Err(RspscError::InvalidCosts { total, c_bar });
    }

    let k = sorting_tracks;
    let outbound = k + 1;
    let num_tracks = k + 2 + n;
    let departure_of = |value: u32| outbound + value as usize;

    let tracks: Vec<TrackSegment> = (0..num_tracks)
        .map(|id| TrackSegment {
            id,
            kind: if id <= outbound {
                TrackKind::Classification
            } else {
                TrackKind::Departure
            },
            capacity: n as f64,
        })
        .collect();

    let groups: Vec<CarGroup> = (1..=n as u32)
        .map(|v| CarGroup {
            id: format!("g{v}"),
            length: 1.0,
            destination: Destination::Fixed(departure_of(v)),
        })
        .collect();

    // The written sequence is pop order; stored sequences are dead-end
    // first, so the source track holds it reversed.
    let mut initial = YardState::new(num_tracks);
    for &v in sequence.iter().rev() {
        initial.track_mut(0).push(format!("g{v}"));
    }

    let mut cost = vec![vec![c_bar; num_tracks]; num_tracks];
    for (i, row) in cost.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for j in 1..=k {
        cost[0][j] = 0.0; // source -> sorting
        cost[j][outbound] = 0.0; // sorting -> outbound
    }
    cost[outbound][outbound + 1] = r; // outbound -> first departure
    for v in 1..n {
        let d = outbound + v;
        cost[d][d + 1] = r;
        cost[d + 1][d] = r;
    }

    Ok(YardInstance {
        tracks,
        groups,
        initial,
        cost,
    })
}
