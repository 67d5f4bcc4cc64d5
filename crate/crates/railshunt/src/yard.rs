//! Yard model: tracks, car groups, states, and the semantics of a single
//! shunting move.
//!
//! A yard is a set of one-sided track segments. Each track is a stack whose
//! accessible end is the *switch end*; the closed end is the *dead end*.
//! Sequences are stored dead-end-first, so index 0 is the group closest to
//! the dead end and the last index is the group a locomotive can reach.
//! The paper-style 1-based position of a group equals its sequence index + 1.
//!
//! One shunting move pulls the `count` groups nearest the switch end of a
//! source track and pushes them, in the same relative order, onto the switch
//! end of a destination track. Its cost depends only on the track pair.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Index of a track segment. Ids are contiguous `0..K` and order-stable;
/// track 0 is the topmost track in layout diagrams.
pub type TrackId = usize;

/// Stable identifier of a car group.
pub type GroupId = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackKind {
    Classification,
    Departure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackSegment {
    pub id: TrackId,
    pub kind: TrackKind,
    /// Usable length of the segment in the same units as group lengths.
    pub capacity: f64,
}

/// Where a group must end up for the yard to be sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Destination {
    /// Must end on a specific departure track.
    Fixed(TrackId),
    /// May end on any classification track.
    AnyClassification,
}

impl Serialize for Destination {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Destination::Fixed(t) => s.serialize_some(t),
            Destination::AnyClassification => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Destination {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Option<TrackId> = Option::deserialize(d)?;
        Ok(match v {
            Some(t) => Destination::Fixed(t),
            None => Destination::AnyClassification,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarGroup {
    pub id: GroupId,
    pub length: f64,
    /// `null` in JSON means the group may settle on any classification track.
    pub destination: Destination,
}

impl CarGroup {
    pub fn is_destined(&self) -> bool {
        matches!(self.destination, Destination::Fixed(_))
    }
}

/// Static problem data: layout, groups, initial placement and the move cost
/// matrix `cost[i][j]` for ordered track pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YardInstance {
    pub tracks: Vec<TrackSegment>,
    pub groups: Vec<CarGroup>,
    pub initial: YardState,
    pub cost: Vec<Vec<f64>>,
}

/// Per-track ordered group sequences, dead-end-first.
///
/// Serialized as a map from track id to the id sequence; empty tracks may be
/// omitted in files. Equality and hashing ignore trailing empty tracks, so a
/// state round-trips through JSON unchanged.
#[derive(Debug, Clone, Default)]
pub struct YardState {
    tracks: Vec<Vec<GroupId>>,
}

impl PartialEq for YardState {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Eq for YardState {}

impl std::hash::Hash for YardState {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.trimmed().hash(state);
    }
}

impl Serialize for YardState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, &Vec<GroupId>> = self
            .tracks
            .iter()
            .enumerate()
            .filter(|(_, seq)| !seq.is_empty())
            .map(|(i, seq)| (i.to_string(), seq))
            .collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for YardState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map: BTreeMap<String, Vec<GroupId>> = BTreeMap::deserialize(d)?;
        let mut tracks = Vec::new();
        for (k, seq) in map {
            let idx: usize = k.parse().map_err(serde::de::Error::custom)?;
            if tracks.len() <= idx {
                tracks.resize(idx + 1, Vec::new());
            }
            tracks[idx] = seq;
        }
        Ok(YardState { tracks })
    }
}

impl YardState {
    pub fn new(num_tracks: usize) -> Self {
        YardState {
            tracks: vec![Vec::new(); num_tracks],
        }
    }

    fn trimmed(&self) -> &[Vec<GroupId>] {
        let mut end = self.tracks.len();
        while end > 0 && self.tracks[end - 1].is_empty() {
            end -= 1;
        }
        &self.tracks[..end]
    }

    pub fn from_tracks(tracks: Vec<Vec<GroupId>>) -> Self {
        YardState { tracks }
    }

    /// Sequence on `track`, dead-end-first. Tracks beyond the stored range
    /// are empty.
    pub fn track(&self, track: TrackId) -> &[GroupId] {
        self.tracks.get(track).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn track_mut(&mut self, track: TrackId) -> &mut Vec<GroupId> {
        if self.tracks.len() <= track {
            self.tracks.resize(track + 1, Vec::new());
        }
        &mut self.tracks[track]
    }

    pub fn num_tracks(&self) -> usize {
        self.tracks.len()
    }

    /// Track currently holding `group`, if any.
    pub fn find(&self, group: &str) -> Option<TrackId> {
        self.tracks
            .iter()
            .position(|seq| seq.iter().any(|g| g == group))
    }

    /// Ensures the state spans at least `num_tracks` tracks.
    pub fn pad_tracks(&mut self, num_tracks: usize) {
        if self.tracks.len() < num_tracks {
            self.tracks.resize(num_tracks, Vec::new());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (TrackId, &[GroupId])> {
        self.tracks.iter().enumerate().map(|(i, s)| (i, s.as_slice()))
    }
}

/// One batch relocation: the `count` switch-end groups of `src` move to the
/// switch end of `dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ShuntMove {
    pub src: TrackId,
    pub dst: TrackId,
    pub count: usize,
}

impl fmt::Display for ShuntMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} x{}", self.src, self.dst, self.count)
    }
}

/// An ordered move sequence with its total cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub moves: Vec<ShuntMove>,
    pub total_cost: f64,
}

impl Plan {
    pub fn empty() -> Self {
        Plan {
            moves: Vec::new(),
            total_cost: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum MoveError {
    #[error("source track {0} is empty")]
    EmptySource(TrackId),
    #[error("move wants {count} groups but track {src} holds {available}")]
    CountExceedsSource {
        src: TrackId,
        count: usize,
        available: usize,
    },
    #[error("capacity of track {dst} exceeded ({load} > {capacity})")]
    CapacityExceeded {
        dst: TrackId,
        load: f64,
        capacity: f64,
    },
    #[error("move from track {0} onto itself")]
    SelfMove(TrackId),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("track ids are not contiguous 0..K")]
    NonContiguousTracks,
    #[error("group {0:?} has nonpositive length")]
    NonPositiveLength(GroupId),
    #[error("group {0:?} declares destination {1} which is not a departure track")]
    BadDestination(GroupId, TrackId),
    #[error("group {0:?} appears {1} times in the initial state (expected exactly once)")]
    BadInitialMultiplicity(GroupId, usize),
    #[error("group {0:?} starts on track {1} which is not a classification track")]
    InitialOffClassification(GroupId, TrackId),
    #[error("initial load on track {0} exceeds its capacity")]
    InitialOverCapacity(TrackId),
    #[error("cost matrix must be {0}x{0}")]
    BadCostShape(usize),
    #[error("cost[{0}][{1}] is negative")]
    NegativeCost(TrackId, TrackId),
}

impl YardInstance {
    pub fn num_tracks(&self) -> usize {
        self.tracks.len()
    }

    pub fn group(&self, id: &str) -> Option<&CarGroup> {
        self.groups.iter().find(|g| g.id == id)
    }

    pub fn classification_tracks(&self) -> impl Iterator<Item = TrackId> + '_ {
        self.tracks
            .iter()
            .filter(|t| t.kind == TrackKind::Classification)
            .map(|t| t.id)
    }

    pub fn departure_tracks(&self) -> impl Iterator<Item = TrackId> + '_ {
        self.tracks
            .iter()
            .filter(|t| t.kind == TrackKind::Departure)
            .map(|t| t.id)
    }

    pub fn is_classification(&self, track: TrackId) -> bool {
        self.tracks
            .get(track)
            .is_some_and(|t| t.kind == TrackKind::Classification)
    }

    pub fn move_cost(&self, src: TrackId, dst: TrackId) -> f64 {
        self.cost[src][dst]
    }

    /// Sum of group lengths currently on `track`.
    pub fn load(&self, state: &YardState, track: TrackId) -> f64 {
        state
            .track(track)
            .iter()
            .filter_map(|id| self.group(id))
            .map(|g| g.length)
            .sum()
    }

    /// Checks the structural invariants of the instance.
    pub fn validate(&self) -> Result<(), InstanceError> {
        let k = self.tracks.len();
        for (i, t) in self.tracks.iter().enumerate() {
            if t.id != i {
                return Err(InstanceError::NonContiguousTracks);
            }
        }
        for g in &self.groups {
            if g.length <= 0.0 {
                return Err(InstanceError::NonPositiveLength(g.id.clone()));
            }
            if let Destination::Fixed(d) = g.destination {
                if self.tracks.get(d).map(|t| t.kind) != Some(TrackKind::Departure) {
                    return Err(InstanceError::BadDestination(g.id.clone(), d));
                }
            }
        }
        for g in &self.groups {
            let n = self
                .initial
                .iter()
                .flat_map(|(_, seq)| seq.iter())
                .filter(|id| **id == g.id)
                .count();
            if n != 1 {
                return Err(InstanceError::BadInitialMultiplicity(g.id.clone(), n));
            }
        }
        for (track, seq) in self.initial.iter() {
            if !seq.is_empty() && !self.is_classification(track) {
                return Err(InstanceError::InitialOffClassification(
                    seq[0].clone(),
                    track,
                ));
            }
        }
        for t in &self.tracks {
            if self.load(&self.initial, t.id) > t.capacity + 1e-9 {
                return Err(InstanceError::InitialOverCapacity(t.id));
            }
        }
        if self.cost.len() != k || self.cost.iter().any(|row| row.len() != k) {
            return Err(InstanceError::BadCostShape(k));
        }
        for (i, row) in self.cost.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if i != j && c < 0.0 {
                    return Err(InstanceError::NegativeCost(i, j));
                }
            }
        }
        Ok(())
    }
}

/// Applies one move, returning the successor state.
///
/// The moved groups keep their relative order, so each of them undergoes the
/// same position change `N_dst - N_src + count` (in 1-based positions).
pub fn apply_move(
    state: &YardState,
    mv: ShuntMove,
    instance: &YardInstance,
) -> Result<YardState, MoveError> {
    apply_move_impl(state, mv, instance, true)
}

/// Same as [`apply_move`] but without the destination capacity check. The
/// horizon heuristic plans as if tracks were unbounded.
pub fn apply_move_unchecked_capacity(
    state: &YardState,
    mv: ShuntMove,
    instance: &YardInstance,
) -> Result<YardState, MoveError> {
    apply_move_impl(state, mv, instance, false)
}

fn apply_move_impl(
    state: &YardState,
    mv: ShuntMove,
    instance: &YardInstance,
    check_capacity: bool,
) -> Result<YardState, MoveError> {
    if mv.src == mv.dst {
        return Err(MoveError::SelfMove(mv.src));
    }
    let available = state.track(mv.src).len();
    if available == 0 {
        return Err(MoveError::EmptySource(mv.src));
    }
    if mv.count == 0 || mv.count > available {
        return Err(MoveError::CountExceedsSource {
            src: mv.src,
            count: mv.count,
            available,
        });
    }
    let moved = &state.track(mv.src)[available - mv.count..];
    if check_capacity {
        let extra: f64 = moved
            .iter()
            .filter_map(|id| instance.group(id))
            .map(|g| g.length)
            .sum();
        let load = instance.load(state, mv.dst) + extra;
        let capacity = instance.tracks[mv.dst].capacity;
        if load > capacity + 1e-9 {
            return Err(MoveError::CapacityExceeded {
                dst: mv.dst,
                load,
                capacity,
            });
        }
    }
    let mut next = state.clone();
    next.pad_tracks(instance.num_tracks());
    let tail = {
        let src = next.track_mut(mv.src);
        src.split_off(available - mv.count)
    };
    next.track_mut(mv.dst).extend(tail);
    Ok(next)
}

/// Every legal move in `state`, in ascending `(src, dst, count)` order.
pub fn legal_moves(state: &YardState, instance: &YardInstance) -> Vec<ShuntMove> {
    let k = instance.num_tracks();
    let mut out = Vec::new();
    for src in 0..k {
        let seq = state.track(src);
        if seq.is_empty() {
            continue;
        }
        // Suffix lengths of the source, so capacity checks are incremental.
        let lengths: Vec<f64> = seq
            .iter()
            .filter_map(|id| instance.group(id))
            .map(|g| g.length)
            .collect();
        for dst in 0..k {
            if dst == src {
                continue;
            }
            let mut load = instance.load(state, dst);
            let capacity = instance.tracks[dst].capacity;
            for count in 1..=seq.len() {
                load += lengths[seq.len() - count];
                if load > capacity + 1e-9 {
                    break;
                }
                out.push(ShuntMove { src, dst, count });
            }
        }
    }
    out.sort_unstable();
    out
}

/// A state is final when every destined group sits on its departure track and
/// every free group sits on some classification track, in any order.
pub fn is_final(state: &YardState, instance: &YardInstance) -> bool {
    instance.groups.iter().all(|g| {
        let Some(track) = state.find(&g.id) else {
            return false;
        };
        match g.destination {
            Destination::Fixed(d) => track == d,
            Destination::AnyClassification => instance.is_classification(track),
        }
    })
}

/// Sum of `cost[src][dst]` over the plan's moves; the number of groups moved
/// never affects cost.
pub fn plan_cost(plan: &Plan, instance: &YardInstance) -> f64 {
    plan.moves
        .iter()
        .map(|m| instance.move_cost(m.src, m.dst))
        .sum()
}

/// Replays `plan` from the instance's initial state, checking legality of
/// every step; returns the end state.
pub fn replay_plan(
    instance: &YardInstance,
    plan: &Plan,
    enforce_capacity: bool,
) -> Result<YardState, MoveError> {
    let mut state = instance.initial.clone();
    for &mv in &plan.moves {
        state = if enforce_capacity {
            apply_move(&state, mv, instance)?
        } else {
            apply_move_unchecked_capacity(&state, mv, instance)?
        };
    }
    Ok(state)
}

/// Convenience constructor used across solvers and tests: `kinds[i]` gives
/// each track's kind, capacities are uniform, groups get single-letter-style
/// ids `g0, g1, ...` and the cost matrix is `|i - j|`.
pub fn build_instance(
    kinds: &[TrackKind],
    capacity: f64,
    groups: Vec<CarGroup>,
    initial: YardState,
) -> YardInstance {
    let k = kinds.len();
    let tracks = kinds
        .iter()
        .enumerate()
        .map(|(id, &kind)| TrackSegment {
            id,
            kind,
            capacity,
        })
        .collect();
    let cost = (0..k)
        .map(|i| (0..k).map(|j| (i as f64 - j as f64).abs()).collect())
        .collect();
    let mut initial = initial;
    initial.pad_tracks(k);
    YardInstance {
        tracks,
        groups,
        initial,
        cost,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letter_groups(spec: &[(&str, Option<TrackId>)]) -> Vec<CarGroup> {
        spec.iter()
            .map(|(id, dest)| CarGroup {
                id: (*id).to_string(),
                length: 1.0,
                destination: match dest {
                    Some(d) => Destination::Fixed(*d),
                    None => Destination::AnyClassification,
                },
            })
            .collect()
    }

    fn state(tracks: &[&[&str]]) -> YardState {
        YardState::from_tracks(
            tracks
                .iter()
                .map(|seq| seq.iter().map(|s| s.to_string()).collect())
                .collect(),
        )
    }

    /// Two classification tracks, one departure track 0.
    fn tiny_instance() -> YardInstance {
        use TrackKind::*;
        build_instance(
            &[Departure, Classification, Classification],
            10.0,
            letter_groups(&[("a", Some(0)), ("b", Some(0)), ("c", None), ("d", Some(0))]),
            state(&[&[], &["a", "b", "c"], &["d"]]),
        )
    }

    #[test]
    fn single_group_to_empty_track() {
        use TrackKind::*;
        let inst = build_instance(
            &[Classification, Classification],
            10.0,
            letter_groups(&[("a", None)]),
            state(&[&["a"], &[]]),
        );
        let next = apply_move(
            &inst.initial,
            ShuntMove {
                src: 0,
                dst: 1,
                count: 1,
            },
            &inst,
        )
        .unwrap();
        assert!(next.track(0).is_empty());
        assert_eq!(next.track(1), ["a".to_string()]);
    }

    #[test]
    fn batch_move_preserves_order_and_position_algebra() {
        // {T1:[a,b,c], T2:[d]}, move two groups T1 -> T2.
        let inst = tiny_instance();
        let next = apply_move(
            &inst.initial,
            ShuntMove {
                src: 1,
                dst: 2,
                count: 2,
            },
            &inst,
        )
        .unwrap();
        assert_eq!(next.track(1), ["a".to_string()]);
        assert_eq!(
            next.track(2),
            ["d".to_string(), "b".to_string(), "c".to_string()]
        );
        // Position change of each moved group is N_dst - N_src + count = 1 - 3 + 2 = 0.
        let pos_before = 2; // b was at 1-based position 2 on T1
        let pos_after = next.track(2).iter().position(|g| g == "b").unwrap() + 1;
        assert_eq!(pos_after as i64 - pos_before as i64, 1 - 3 + 2);
    }

    #[test]
    fn self_move_rejected() {
        let inst = tiny_instance();
        let err = apply_move(
            &inst.initial,
            ShuntMove {
                src: 1,
                dst: 1,
                count: 1,
            },
            &inst,
        )
        .unwrap_err();
        assert_eq!(err, MoveError::SelfMove(1));
    }

    #[test]
    fn empty_source_and_count_errors() {
        let inst = tiny_instance();
        assert_eq!(
            apply_move(
                &inst.initial,
                ShuntMove {
                    src: 0,
                    dst: 1,
                    count: 1
                },
                &inst
            )
            .unwrap_err(),
            MoveError::EmptySource(0)
        );
        assert!(matches!(
            apply_move(
                &inst.initial,
                ShuntMove {
                    src: 2,
                    dst: 1,
                    count: 5
                },
                &inst
            )
            .unwrap_err(),
            MoveError::CountExceedsSource { .. }
        ));
    }

    #[test]
    fn capacity_enforced() {
        use TrackKind::*;
        let inst = build_instance(
            &[Classification, Classification],
            2.0,
            letter_groups(&[("a", None), ("b", None), ("c", None)]),
            state(&[&["a", "b"], &["c"]]),
        );
        let err = apply_move(
            &inst.initial,
            ShuntMove {
                src: 0,
                dst: 1,
                count: 2,
            },
            &inst,
        )
        .unwrap_err();
        assert!(matches!(err, MoveError::CapacityExceeded { dst: 1, .. }));
        // The unchecked variant allows it.
        assert!(apply_move_unchecked_capacity(
            &inst.initial,
            ShuntMove {
                src: 0,
                dst: 1,
                count: 2
            },
            &inst
        )
        .is_ok());
    }

    #[test]
    fn legal_moves_enumeration() {
        use TrackKind::*;
        let empty = build_instance(
            &[Classification, Classification],
            4.0,
            Vec::new(),
            YardState::new(2),
        );
        assert!(legal_moves(&empty.initial, &empty).is_empty());

        let two = build_instance(
            &[Classification, Classification],
            4.0,
            letter_groups(&[("a", None), ("b", None)]),
            state(&[&["a", "b"], &[]]),
        );
        let moves = legal_moves(&two.initial, &two);
        assert_eq!(
            moves,
            vec![
                ShuntMove {
                    src: 0,
                    dst: 1,
                    count: 1
                },
                ShuntMove {
                    src: 0,
                    dst: 1,
                    count: 2
                },
            ]
        );
    }

    #[test]
    fn finality() {
        use TrackKind::*;
        // g1 destined to T0 sits on T0, free group on classification: final.
        let inst = build_instance(
            &[Departure, Classification, Classification],
            10.0,
            letter_groups(&[("g1", Some(0)), ("g2", None)]),
            state(&[&[], &["g1", "g2"], &[]]),
        );
        assert!(!is_final(&inst.initial, &inst));
        let done = state(&[&["g1"], &["g2"], &[]]);
        assert!(is_final(&done, &inst));
        // Free groups only: initial state is already final.
        let free = build_instance(
            &[Departure, Classification, Classification],
            10.0,
            letter_groups(&[("x", None)]),
            state(&[&[], &["x"], &[]]),
        );
        assert!(is_final(&free.initial, &free));
    }

    #[test]
    fn plan_costs() {
        use TrackKind::*;
        let inst = build_instance(
            &[Classification, Classification, Classification, Classification],
            10.0,
            letter_groups(&[("a", None)]),
            state(&[&["a"], &[], &[], &[]]),
        );
        assert_eq!(plan_cost(&Plan::empty(), &inst), 0.0);
        let back_and_forth = Plan {
            moves: vec![
                ShuntMove {
                    src: 0,
                    dst: 1,
                    count: 1,
                },
                ShuntMove {
                    src: 1,
                    dst: 0,
                    count: 1,
                },
            ],
            total_cost: 2.0,
        };
        assert_eq!(plan_cost(&back_and_forth, &inst), 2.0);
        let far = Plan {
            moves: vec![
                ShuntMove {
                    src: 0,
                    dst: 3,
                    count: 1,
                },
                ShuntMove {
                    src: 3,
                    dst: 1,
                    count: 1,
                },
            ],
            total_cost: 5.0,
        };
        assert_eq!(plan_cost(&far, &inst), 5.0);
    }

    #[test]
    fn validate_catches_bad_instances() {
        let mut inst = tiny_instance();
        assert!(inst.validate().is_ok());
        inst.groups[0].destination = Destination::Fixed(1);
        assert!(matches!(
            inst.validate(),
            Err(InstanceError::BadDestination(_, 1))
        ));
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = tiny_instance();
        let text = serde_json::to_string_pretty(&inst).unwrap();
        let back: YardInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(inst, back);
        let plan = Plan {
            moves: vec![ShuntMove {
                src: 1,
                dst: 0,
                count: 3,
            }],
            total_cost: 1.0,
        };
        let text = serde_json::to_string(&plan).unwrap();
        let back: Plan = serde_json::from_str(&text).unwrap();
        assert_eq!(plan, back);
    }
}
