//! Adaptive railcar-grouping heuristic.
//!
//! Pipeline: (1) preprocessing moves that merge same-destination runs,
//! consolidate occupied tracks and clear blocking free groups, so the state
//! the search starts from has fewer groups and tracks; (2) construction of a
//! pruned state graph over *merged* states, where a newly generated state is
//! kept only when its average distance-to-go is strictly lower than its
//! parent's; (3) a nonnegative-cost shortest path from the preprocessed
//! state to the (collapsed) final state. The reported plan is the
//! preprocessing moves followed by the path moves; its cost is the sum of
//! both parts.
//!
//! The distance-to-go of a destined group is the move cost from its current
//! track to its destination; a free group scores zero on any classification
//! track and the cost to the nearest classification track otherwise. The
//! average is taken over the merged groups of the state being scored.

use crate::counting::{count_states, StateCountParams};
use crate::dense::{Dense, DenseMove, EncodeError};
use crate::grouping::Workspace;
use crate::horizon::{consolidate_upward, merge_pairs};
use crate::yard::{
    is_final, replay_plan, CarGroup, GroupId, Plan, ShuntMove, TrackId, TrackKind,
    YardInstance, YardState,
};
use num_bigint::BigUint;
use num_traits::One;
use rustc_hash::FxHashMap;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

#[derive(Debug, Clone)]
pub struct ArgdpConfig {
    /// Track-pair index difference for the merge phase.
    pub delta: usize,
    /// Vertex cap for the reduced graph.
    pub max_states: usize,
}

impl Default for ArgdpConfig {
    fn default() -> Self {
        ArgdpConfig {
            delta: crate::horizon::DEFAULT_DELTA,
            max_states: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArgdpError {
    #[error("the pruned graph does not contain a final state")]
    HeuristicFailure,
    #[error("reduced-graph state limit exceeded ({states} states)")]
    ResourceLimit { states: usize },
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("heuristic produced an illegal plan: {0}")]
    IllegalPlan(String),
}

#[derive(Debug, Clone)]
pub struct ArgdpStats {
    /// Cost of the preprocessing moves.
    pub preprocessing_cost: f64,
    /// Shortest-path cost inside the reduced graph.
    pub path_cost: f64,
    pub total_cost: f64,
    /// Vertices in the reduced graph, root and sink included.
    pub reduced_vertices: usize,
    pub reduced_edges: usize,
    /// Closed-form size of the full state space of the original instance.
    pub full_states: BigUint,
    /// `(|V| - |V_hat|) / |V| * 100`.
    pub reduction_percent: f64,
}

#[derive(Debug, Clone)]
pub struct ArgdpSolution {
    pub plan: Plan,
    pub stats: ArgdpStats,
}

/// Result of a preprocessing stage: the moves performed, their cost, and the
/// parts of the problem the search no longer has to look at.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub state: YardState,
    pub moves: Vec<ShuntMove>,
    pub cost: f64,
    /// Free groups resting in dead-end runs of classification tracks; they
    /// are already where they may stay, so the search ignores them.
    pub parked: Vec<GroupId>,
    /// Empty classification tracks removed from the search.
    pub dropped_tracks: Vec<TrackId>,
}

/// Merges every maximal run of adjacent same-destination groups on one track
/// into a single group whose length is the sum of its members. The merged
/// group id is the sorted member ids joined with `+`; single-member runs
/// keep their id. Idempotent.
pub fn merge_canonical(state: &YardState, groups: &[CarGroup]) -> (YardState, Vec<CarGroup>) {
    let lookup: FxHashMap<&str, &CarGroup> =
        groups.iter().map(|g| (g.id.as_str(), g)).collect();
    let mut out_state = YardState::new(state.num_tracks());
    let mut out_groups: Vec<CarGroup> = Vec::new();
    for (track, seq) in state.iter() {
        let mut runs: Vec<Vec<&CarGroup>> = Vec::new();
        for id in seq {
            let g = lookup[id.as_str()];
            match runs.last_mut() {
                Some(run) if run[0].destination == g.destination => run.push(g),
                _ => runs.push(vec![g]),
            }
        }
        for run in runs {
            let merged = if run.len() == 1 {
                run[0].clone()
            } else {
                let mut members: Vec<&str> = run.iter().map(|g| g.id.as_str()).collect();
                members.sort_unstable();
                CarGroup {
                    id: members.join("+"),
                    length: run.iter().map(|g| g.length).sum(),
                    destination: run[0].destination,
                }
            };
            out_state.track_mut(track).push(merged.id.clone());
            if !out_groups.iter().any(|g| g.id == merged.id) {
                out_groups.push(merged);
            }
        }
    }
    (out_state, out_groups)
}

/// Preprocessing for instances without free groups: merge switch-end runs
/// over near track pairs; failing that, merge over consecutive pairs whose
/// dead-end/switch-end runs match; consolidate everything onto the lowest
/// occupied track, relocate the train to the top classification track, and
/// drop empty classification tracks below the scratch track from the search.
pub fn preprocess_nonmixed(instance: &YardInstance, delta: usize) -> Preprocessed {
    let mut ws = Workspace::new(instance, true);

    merge_pairs(&mut ws, delta);
    if ws.cost == 0.0 && !ws.aborted {
        merge_consecutive_pairs(&mut ws);
    }
    if !ws.aborted {
        consolidate_upward(&mut ws);
    }
    if !ws.aborted {
        if let (Some(&h1), Some(top)) = (ws.occupied_tracks().first(), ws.top_classification()) {
            if h1 != top {
                let count = ws.state.track(h1).len();
                ws.try_perform(h1, top, count);
            }
        }
    }

    let dropped_tracks = match ws.top_classification() {
        Some(top) => instance
            .classification_tracks()
            .filter(|&t| t > top + 1 && ws.state.track(t).is_empty())
            .collect(),
        None => Vec::new(),
    };
    Preprocessed {
        state: ws.state,
        moves: ws.moves,
        cost: ws.cost,
        parked: Vec::new(),
        dropped_tracks,
    }
}

/// Consecutive-pair merges: for ascending occupied `i` with `i + 1` also
/// occupied, when the dead-end run of `i` shares its destination with the
/// switch-end run of `i + 1` (and the reverse pairing does not hold), move
/// all of `i` onto `i + 1`.
fn merge_consecutive_pairs(ws: &mut Workspace<'_>) {
    let snapshot = ws.occupied_tracks();
    for &i in &snapshot {
        if ws.aborted {
            break;
        }
        let j = i + 1;
        if !ws.occupied_tracks().contains(&i) || !ws.occupied_tracks().contains(&j) {
            continue;
        }
        let (Some(dd_i), Some(ds_j)) = (ws.dead_end_dest(i), ws.switch_end_dest(j)) else {
            continue;
        };
        if dd_i != ds_j {
            continue;
        }
        if ws.switch_end_dest(i).is_some() && ws.switch_end_dest(i) == ws.dead_end_dest(j) {
            continue;
        }
        let count = ws.state.track(i).len();
        ws.try_perform(i, j, count);
    }
}

/// Preprocessing for instances with both destined and free groups: shuffle
/// every switch-end blocking run and every highest middle blocking run to a
/// dead-end position via the neighbor track, then park all dead-end free
/// runs. No other moves are made; the graph phase handles the rest.
pub fn preprocess_mixed(instance: &YardInstance) -> Preprocessed {
    let mut ws = Workspace::new(instance, true);
    let occupied = ws.occupied_tracks();

    if occupied.len() == 1 {
        let h1 = occupied[0];
        let nbr = ws.neighbor(h1);
        clear_blockers_to_scratch(&mut ws, h1, nbr);
    } else if occupied.len() > 1 {
        for idx in (1..occupied.len()).rev() {
            if ws.aborted {
                break;
            }
            let hw = occupied[idx];
            evacuate_and_return(&mut ws, hw);
        }
        let h1 = occupied[0];
        if !ws.aborted && has_blocker(&ws, h1) {
            let below = h1 + 1;
            if instance.is_classification(below) {
                if ws.is_effectively_empty(below) {
                    clear_blockers_to_scratch(&mut ws, h1, Some(below));
                } else if ws.cost == 0.0 {
                    // Pull the destined groups of the track below on top of
                    // the blockers, then push everything through the highest
                    // middle blocker back down.
                    let movable = ws.state.track(below).len() - ws.dead_end_free_len(below);
                    if movable > 0 {
                        ws.try_perform(below, h1, movable);
                    }
                    if !ws.aborted {
                        if let Some(idx) = sa_mb_run_index(&ws, h1) {
                            let suffix = ws.suffix_len_from_run(h1, idx);
                            ws.try_perform(h1, below, suffix);
                        }
                    }
                }
            }
        }
    }

    let mut parked = Vec::new();
    let mut state = ws.state.clone();
    for t in instance.classification_tracks() {
        let run = ws.dead_end_free_len(t);
        if run > 0 {
            let seq = state.track_mut(t);
            parked.extend(seq.drain(..run));
        }
    }
    // Tracks holding only parked groups or nothing count as empty and leave
    // the search, except the top classification track and its scratch
    // neighbor.
    let dropped_tracks = match instance.classification_tracks().min() {
        Some(top) => instance
            .classification_tracks()
            .filter(|&t| t > top + 1 && state.track(t).is_empty())
            .collect(),
        None => Vec::new(),
    };
    Preprocessed {
        state,
        moves: ws.moves,
        cost: ws.cost,
        parked,
        dropped_tracks,
    }
}

/// Switch-end blocking run on an occupied track: the track's top run is
/// free and a destined run lies beneath it.
fn lb_run_len(ws: &Workspace<'_>, track: TrackId) -> Option<usize> {
    let runs = ws.runs(track);
    let last = runs.last()?;
    (last.is_free() && runs.len() >= 2).then_some(last.len)
}

/// Index of the highest free run with destined runs on both sides.
fn sa_mb_run_index(ws: &Workspace<'_>, track: TrackId) -> Option<usize> {
    let runs = ws.runs(track);
    (1..runs.len().saturating_sub(1))
        .rev()
        .find(|&i| runs[i].is_free())
}

fn has_blocker(ws: &Workspace<'_>, track: TrackId) -> bool {
    lb_run_len(ws, track).is_some() || sa_mb_run_index(ws, track).is_some()
}

/// Clears blockers on `track` by pushing them onto `scratch`, where they end
/// up dead-end-positioned: first the switch-end run, then the suffix through
/// the highest middle run.
fn clear_blockers_to_scratch(ws: &mut Workspace<'_>, track: TrackId, scratch: Option<TrackId>) {
    let Some(scratch) = scratch else {
        return;
    };
    if let Some(len) = lb_run_len(ws, track) {
        ws.try_perform(track, scratch, len);
    }
    if ws.aborted {
        return;
    }
    if let Some(idx) = sa_mb_run_index(ws, track) {
        let suffix = ws.suffix_len_from_run(track, idx);
        ws.try_perform(track, scratch, suffix);
    }
}

/// Loop body for tracks below the top occupied one: evacuate everything
/// above the dead-end free run to the neighbor, then bring the switch-end
/// blocking run and the suffix through the highest middle blocker straight
/// back, leaving them dead-end-positioned.
fn evacuate_and_return(ws: &mut Workspace<'_>, hw: TrackId) {
    let lb = lb_run_len(ws, hw);
    let samb = sa_mb_run_index(ws, hw);
    if lb.is_none() && samb.is_none() {
        return;
    }
    let Some(nbr) = ws.neighbor(hw) else {
        return;
    };
    let samb_suffix = samb.map(|idx| ws.suffix_len_from_run(hw, idx));
    let movable = ws.state.track(hw).len() - ws.dead_end_free_len(hw);
    if movable == 0 || !ws.try_perform(hw, nbr, movable) {
        return;
    }
    if let Some(len) = lb {
        if !ws.try_perform(nbr, hw, len) {
            return;
        }
    }
    if let Some(suffix) = samb_suffix {
        ws.try_perform(nbr, hw, suffix - lb.unwrap_or(0));
    }
}

const GSEP: u8 = 0xFD;

/// Merged state over the active tracks: per track a sequence of logical
/// groups, each a sorted member set. Tracks are separated by `0xFE`, groups
/// within a track by `0xFD`.
#[derive(Clone, PartialEq, Eq, Hash)]
struct MergedState(Box<[u8]>);

type TrackGroups = Vec<Vec<u8>>;

impl MergedState {
    fn encode(tracks: &[TrackGroups]) -> Self {
        let mut buf = Vec::new();
        for (i, track) in tracks.iter().enumerate() {
            if i > 0 {
                buf.push(crate::dense::SEP);
            }
            for (j, group) in track.iter().enumerate() {
                if j > 0 {
                    buf.push(GSEP);
                }
                buf.extend_from_slice(group);
            }
        }
        MergedState(buf.into_boxed_slice())
    }

    fn decode(&self, tracks: usize) -> Vec<TrackGroups> {
        let mut out: Vec<TrackGroups> = self
            .0
            .split(|&b| b == crate::dense::SEP)
            .map(|track| {
                if track.is_empty() {
                    Vec::new()
                } else {
                    track.split(|&b| b == GSEP).map(<[u8]>::to_vec).collect()
                }
            })
            .collect();
        while out.len() < tracks {
            out.push(Vec::new());
        }
        out
    }
}

/// Pruned graph over merged states. Edges are stored in compressed form,
/// grouped by source vertex (expansion happens in vertex-id order); costs
/// are recomputed from the move's track pair.
pub struct ReducedGraph {
    dense: Dense,
    /// Original track ids that take part in the search.
    active: Vec<TrackId>,
    /// Length already resting on each active track from parked groups.
    base_load: Vec<f64>,
    vertices: Vec<VertexData>,
    /// `edge_start[v]..edge_start[v + 1]` indexes the edges leaving `v`.
    edge_start: Vec<u32>,
    edge_to: Vec<u32>,
    /// Move per edge; src/dst index into `active`, count is logical groups.
    edge_mv: Vec<DenseMove>,
    root: u32,
    sink_reached: bool,
}

struct VertexData {
    state: Option<MergedState>, // None for the collapsed sink
    theta: f64,
}

const SINK: u32 = 0;

/// Byte-range view of an encoded merged state: track spans and the member
/// spans of each logical group. Children are written straight from these
/// ranges into a reusable buffer.
struct TrackView {
    track_groups: Vec<Vec<(usize, usize)>>,
}

impl TrackView {
    fn parse(bytes: &[u8], track_count: usize) -> TrackView {
        let mut track_groups: Vec<Vec<(usize, usize)>> = Vec::with_capacity(track_count);
        let mut groups: Vec<(usize, usize)> = Vec::new();
        let mut start = 0usize;
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                crate::dense::SEP => {
                    if i > start {
                        groups.push((start, i));
                    }
                    track_groups.push(std::mem::take(&mut groups));
                    start = i + 1;
                }
                GSEP => {
                    groups.push((start, i));
                    start = i + 1;
                }
                _ => {}
            }
        }
        if bytes.len() > start {
            groups.push((start, bytes.len()));
        }
        track_groups.push(groups);
        while track_groups.len() < track_count {
            track_groups.push(Vec::new());
        }
        TrackView { track_groups }
    }

    fn tracks(&self) -> usize {
        self.track_groups.len()
    }

    fn group_count(&self, slot: usize) -> usize {
        self.track_groups[slot].len()
    }

    fn group<'a>(&self, bytes: &'a [u8], slot: usize, gi: usize) -> &'a [u8] {
        let (s, e) = self.track_groups[slot][gi];
        &bytes[s..e]
    }

    /// Writes the encoding of the state after moving the top `k` groups
    /// from `src` to `dst` (merging the junction when `merge` is set).
    fn write_child(
        &self,
        bytes: &[u8],
        src: usize,
        dst: usize,
        k: usize,
        merge: bool,
        out: &mut Vec<u8>,
    ) {
        out.clear();
        let m = self.group_count(src);
        for slot in 0..self.tracks() {
            if slot > 0 {
                out.push(crate::dense::SEP);
            }
            if slot == src {
                for gi in 0..m - k {
                    if gi > 0 {
                        out.push(GSEP);
                    }
                    out.extend_from_slice(self.group(bytes, slot, gi));
                }
            } else if slot == dst {
                let dn = self.group_count(dst);
                let merged_until = if merge { dn - 1 } else { dn };
                let mut first = true;
                for gi in 0..merged_until {
                    if !first {
                        out.push(GSEP);
                    }
                    first = false;
                    out.extend_from_slice(self.group(bytes, dst, gi));
                }
                let mut moved_from = m - k;
                if merge {
                    if !first {
                        out.push(GSEP);
                    }
                    first = false;
                    merge_sorted(
                        self.group(bytes, dst, dn - 1),
                        self.group(bytes, src, m - k),
                        out,
                    );
                    moved_from += 1;
                }
                for gi in moved_from..m {
                    if !first {
                        out.push(GSEP);
                    }
                    first = false;
                    out.extend_from_slice(self.group(bytes, src, gi));
                }
            } else {
                for (gi, &(s, e)) in self.track_groups[slot].iter().enumerate() {
                    if gi > 0 {
                        out.push(GSEP);
                    }
                    out.extend_from_slice(&bytes[s..e]);
                }
            }
        }
    }
}

/// Merges two ascending member runs into `out`, keeping ascending order.
fn merge_sorted(a: &[u8], b: &[u8], out: &mut Vec<u8>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

impl ReducedGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_to.len()
    }

    fn edge_cost(&self, ei: usize) -> f64 {
        let mv = self.edge_mv[ei];
        self.dense
            .cost(self.active[mv.src as usize], self.active[mv.dst as usize])
    }

    /// Source vertex of edge `ei` via the offsets table.
    fn edge_from(&self, ei: usize) -> u32 {
        (self.edge_start.partition_point(|&s| s as usize <= ei) - 1) as u32
    }

    pub fn sink_reached(&self) -> bool {
        self.sink_reached
    }

    /// Average distance-to-go of the root state.
    pub fn root_theta(&self) -> f64 {
        self.vertices[self.root as usize].theta
    }

    /// The edge that first reached `to`, i.e. the one that retained it.
    #[cfg(test)]
    fn first_edge_to(&self, to: u32) -> Option<(u32, DenseMove)> {
        let ei = self.edge_to.iter().position(|&t| t == to)?;
        Some((self.edge_from(ei), self.edge_mv[ei]))
    }
}

/// Builds the pruned graph from a preprocessed state. Children are
/// merge-canonical; a child not seen before is kept only when its average
/// distance-to-go is strictly below its parent's, while transitions into
/// already-retained states always contribute edges.
pub fn build_reduced_graph(
    instance: &YardInstance,
    pre: &Preprocessed,
    max_states: usize,
) -> Result<ReducedGraph, ArgdpError> {
    let dense = Dense::new(instance)?;
    let active: Vec<TrackId> = (0..instance.num_tracks())
        .filter(|t| !pre.dropped_tracks.contains(t))
        .collect();
    let base_load = vec![0.0; active.len()];
    let mut graph = ReducedGraph {
        dense,
        active,
        base_load,
        vertices: Vec::new(),
        edge_start: Vec::new(),
        edge_to: Vec::new(),
        edge_mv: Vec::new(),
        root: 0,
        sink_reached: false,
    };
    graph.build(instance, pre, max_states)?;
    Ok(graph)
}

impl ReducedGraph {
    fn build(
        &mut self,
        instance: &YardInstance,
        pre: &Preprocessed,
        max_states: usize,
    ) -> Result<(), ArgdpError> {
        // Root state in merged coordinates over the active tracks.
        let mut tracks: Vec<TrackGroups> = Vec::with_capacity(self.active.len());
        self.base_load = vec![0.0; self.active.len()];
        for &t in &self.active {
            let mut groups: TrackGroups = Vec::new();
            for id in pre.state.track(t) {
                let gid = self
                    .dense
                    .group_names
                    .iter()
                    .position(|n| n == id)
                    .expect("group exists") as u8;
                match groups.last_mut() {
                    Some(run)
                        if self.dense.dest[run[0] as usize] == self.dense.dest[gid as usize] =>
                    {
                        run.push(gid);
                        run.sort_unstable();
                    }
                    _ => groups.push(vec![gid]),
                }
            }
            tracks.push(groups);
        }
        // Parked groups keep consuming capacity on the track they rest on.
        let physical = replayed_physical(instance, pre);
        for (slot, &t) in self.active.iter().enumerate() {
            let in_state: f64 = pre
                .state
                .track(t)
                .iter()
                .filter_map(|id| instance.group(id).map(|g| g.length))
                .sum();
            self.base_load[slot] = instance.load(&physical, t) - in_state;
        }

        let root_state = MergedState::encode(&tracks);
        self.vertices.push(VertexData {
            state: None,
            theta: 0.0,
        });
        if self.is_final_tracks(&tracks) {
            self.root = SINK;
            self.sink_reached = true;
            return Ok(());
        }
        let root_theta = self.theta_bar(&tracks);
        self.vertices.push(VertexData {
            state: Some(root_state.clone()),
            theta: root_theta,
        });
        self.root = 1;
        let mut index: FxHashMap<Box<[u8]>, u32> = FxHashMap::default();
        index.insert(root_state.0.clone(), 1);

        // Vertices are created and expanded in id order, so the edge lists
        // land grouped by source; `edge_start[0]` stays empty for the sink.
        self.edge_start.push(0);
        let mut scratch: Vec<u8> = Vec::new();
        let mut queue: VecDeque<u32> = VecDeque::new();
        queue.push_back(1);
        while let Some(v) = queue.pop_front() {
            debug_assert_eq!(self.edge_start.len(), v as usize);
            self.edge_start.push(self.edge_to.len() as u32);
            let bytes = self.vertices[v as usize]
                .state
                .as_ref()
                .expect("only the sink lacks a state")
                .0
                .clone();
            let parent_theta = self.vertices[v as usize].theta;
            let view = TrackView::parse(&bytes, self.active.len());

            // Whole-state tallies; children adjust them incrementally.
            let mut theta_sum = 0.0;
            let mut group_count = 0usize;
            let mut nonhome = 0usize;
            let mut loads: Vec<f64> = self.base_load.clone();
            for slot in 0..view.tracks() {
                for gi in 0..view.group_count(slot) {
                    let members = view.group(&bytes, slot, gi);
                    let th = self.theta_of(members[0], slot);
                    theta_sum += th;
                    group_count += 1;
                    if !self.home(members[0], slot) {
                        nonhome += 1;
                    }
                    loads[slot] += self.members_len(members);
                }
            }

            for src in 0..view.tracks() {
                let m = view.group_count(src);
                if m == 0 {
                    continue;
                }
                // Suffix tallies over the moved block, grown one group at a
                // time from the switch end.
                for dst in 0..view.tracks() {
                    if dst == src {
                        continue;
                    }
                    let cap = self.dense.capacity[self.active[dst]];
                    let mut load = loads[dst];
                    let mut moved_theta_src = 0.0;
                    let mut moved_theta_dst = 0.0;
                    let mut moved_nonhome_src = 0usize;
                    let mut moved_nonhome_dst = 0usize;
                    for k in 1..=m {
                        let members = view.group(&bytes, src, m - k);
                        let lead = members[0];
                        load += self.members_len(members);
                        if load > cap + 1e-9 {
                            break;
                        }
                        moved_theta_src += self.theta_of(lead, src);
                        moved_theta_dst += self.theta_of(lead, dst);
                        moved_nonhome_src += usize::from(!self.home(lead, src));
                        moved_nonhome_dst += usize::from(!self.home(lead, dst));

                        // Junction merge: bottom of the moved block meets the
                        // top of the destination.
                        let bottom = lead;
                        let merge = view.group_count(dst) > 0
                            && self.dense.dest
                                [view.group(&bytes, dst, view.group_count(dst) - 1)[0] as usize]
                                == self.dense.dest[bottom as usize];
                        let mut child_theta_sum = theta_sum - moved_theta_src + moved_theta_dst;
                        let mut child_count = group_count;
                        let mut child_nonhome = nonhome - moved_nonhome_src + moved_nonhome_dst;
                        if merge {
                            child_theta_sum -= self.theta_of(bottom, dst);
                            child_count -= 1;
                            if !self.home(bottom, dst) {
                                child_nonhome -= 1;
                            }
                        }
                        let mv = DenseMove {
                            src: src as u8,
                            dst: dst as u8,
                            count: k as u16,
                        };
                        if child_nonhome == 0 {
                            self.edge_to.push(SINK);
                            self.edge_mv.push(mv);
                            self.sink_reached = true;
                            continue;
                        }
                        let theta = child_theta_sum / child_count as f64;
                        view.write_child(&bytes, src, dst, k, merge, &mut scratch);
                        if let Some(&existing) = index.get(scratch.as_slice()) {
                            self.edge_to.push(existing);
                            self.edge_mv.push(mv);
                            continue;
                        }
                        if theta < parent_theta {
                            if self.vertices.len() >= max_states {
                                return Err(ArgdpError::ResourceLimit {
                                    states: self.vertices.len(),
                                });
                            }
                            let id = self.vertices.len() as u32;
                            let key: Box<[u8]> = scratch.as_slice().into();
                            self.vertices.push(VertexData {
                                state: Some(MergedState(key.clone())),
                                theta,
                            });
                            index.insert(key, id);
                            self.edge_to.push(id);
                            self.edge_mv.push(mv);
                            queue.push_back(id);
                        }
                    }
                }
            }
        }
        self.edge_start.push(self.edge_to.len() as u32);
        Ok(())
    }

    fn members_len(&self, members: &[u8]) -> f64 {
        members
            .iter()
            .map(|&g| self.dense.group_len[g as usize])
            .sum()
    }

    /// Distance-to-go of a group led by `gid` standing on active slot `slot`.
    fn theta_of(&self, gid: u8, slot: usize) -> f64 {
        let track = self.active[slot];
        match self.dense.dest[gid as usize] {
            Some(d) => {
                if d as usize == track {
                    0.0
                } else {
                    self.dense.cost(track, d as usize)
                }
            }
            None => {
                if self.dense.kinds[track] == TrackKind::Classification {
                    0.0
                } else {
                    self.dense.nearest_classification[track]
                }
            }
        }
    }

    fn home(&self, gid: u8, slot: usize) -> bool {
        let track = self.active[slot];
        match self.dense.dest[gid as usize] {
            Some(d) => d as usize == track,
            None => self.dense.kinds[track] == TrackKind::Classification,
        }
    }

    fn is_final_tracks(&self, tracks: &[TrackGroups]) -> bool {
        tracks.iter().enumerate().all(|(slot, groups)| {
            let track = self.active[slot];
            groups.iter().all(|g| match self.dense.dest[g[0] as usize] {
                Some(d) => d as usize == track,
                None => self.dense.kinds[track] == TrackKind::Classification,
            })
        })
    }

    fn theta_bar(&self, tracks: &[TrackGroups]) -> f64 {
        let mut sum = 0.0;
        let mut count = 0usize;
        for (slot, groups) in tracks.iter().enumerate() {
            let track = self.active[slot];
            for g in groups {
                count += 1;
                sum += match self.dense.dest[g[0] as usize] {
                    Some(d) => {
                        if d as usize == track {
                            0.0
                        } else {
                            self.dense.cost(track, d as usize)
                        }
                    }
                    None => {
                        if self.dense.kinds[track] == TrackKind::Classification {
                            0.0
                        } else {
                            self.dense.nearest_classification[track]
                        }
                    }
                };
            }
        }
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    }

    /// Shortest path root -> sink by `(cost, moves)`. Returns the raw moves
    /// (original track ids, raw group counts) and the path cost.
    fn shortest_path(&self) -> Option<(Vec<ShuntMove>, f64)> {
        if self.root == SINK {
            return Some((Vec::new(), 0.0));
        }
        if !self.sink_reached {
            return None;
        }
        let n = self.vertices.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut moves = vec![u32::MAX; n];
        let mut pred: Vec<u32> = vec![u32::MAX; n];
        let mut settled = vec![false; n];
        let mut heap: BinaryHeap<Reverse<(u64, u32, u32)>> = BinaryHeap::new();
        dist[self.root as usize] = 0.0;
        moves[self.root as usize] = 0;
        heap.push(Reverse((0, 0, self.root)));
        while let Some(Reverse((_, _, v))) = heap.pop() {
            let vu = v as usize;
            if settled[vu] {
                continue;
            }
            settled[vu] = true;
            if v == SINK {
                break;
            }
            let lo = self.edge_start[vu] as usize;
            let hi = self.edge_start[vu + 1] as usize;
            for ei in lo..hi {
                let tu = self.edge_to[ei] as usize;
                if settled[tu] {
                    continue;
                }
                let nd = dist[vu] + self.edge_cost(ei);
                let nm = moves[vu] + 1;
                if nd < dist[tu] || (nd == dist[tu] && nm < moves[tu]) {
                    dist[tu] = nd;
                    moves[tu] = nm;
                    pred[tu] = ei as u32;
                    heap.push(Reverse((nd.to_bits(), nm, tu as u32)));
                }
            }
        }
        if dist[SINK as usize].is_infinite() {
            return None;
        }
        let mut chain = Vec::new();
        let mut cur = SINK as usize;
        while pred[cur] != u32::MAX {
            let ei = pred[cur] as usize;
            chain.push(ei);
            cur = self.edge_from(ei) as usize;
            if cur == self.root as usize {
                break;
            }
        }
        chain.reverse();
        // Convert logical counts to raw counts by walking the path states.
        let mut out = Vec::with_capacity(chain.len());
        for &ei in &chain {
            let mv = self.edge_mv[ei];
            let from = self.edge_from(ei) as usize;
            let state = self.vertices[from]
                .state
                .as_ref()
                .expect("path vertices have states");
            let tracks = state.decode(self.active.len());
            let src_groups = &tracks[mv.src as usize];
            let raw: usize = src_groups[src_groups.len() - mv.count as usize..]
                .iter()
                .map(Vec::len)
                .sum();
            out.push(ShuntMove {
                src: self.active[mv.src as usize],
                dst: self.active[mv.dst as usize],
                count: raw,
            });
        }
        Some((out, dist[SINK as usize]))
    }
}

/// Physical state after the preprocessing moves, parked groups included.
fn replayed_physical(instance: &YardInstance, pre: &Preprocessed) -> YardState {
    let plan = Plan {
        moves: pre.moves.clone(),
        total_cost: pre.cost,
    };
    replay_plan(instance, &plan, false).expect("preprocessing moves replay")
}

/// Runs the full pipeline: preprocessing, graph construction, shortest path.
pub fn solve_argdp(
    instance: &YardInstance,
    config: &ArgdpConfig,
) -> Result<ArgdpSolution, ArgdpError> {
    let pre = if is_final(&instance.initial, instance) {
        Preprocessed {
            state: instance.initial.clone(),
            moves: Vec::new(),
            cost: 0.0,
            parked: Vec::new(),
            dropped_tracks: Vec::new(),
        }
    } else if instance.groups.iter().all(CarGroup::is_destined) {
        preprocess_nonmixed(instance, config.delta)
    } else {
        preprocess_mixed(instance)
    };

    let graph = build_reduced_graph(instance, &pre, config.max_states)?;
    let Some((path_moves, path_cost)) = graph.shortest_path() else {
        return Err(ArgdpError::HeuristicFailure);
    };

    let mut moves = pre.moves.clone();
    moves.extend(path_moves);
    let total_cost = pre.cost + path_cost;
    let plan = Plan { moves, total_cost };

    let end = replay_plan(instance, &plan, true)
        .map_err(|e| ArgdpError::IllegalPlan(e.to_string()))?;
    if !is_final(&end, instance) {
        return Err(ArgdpError::IllegalPlan(
            "plan does not end in a final state".into(),
        ));
    }

    let params = StateCountParams::from_instance(instance);
    let full_states = count_states(&params).unwrap_or_else(|_| BigUint::one());
    let v_hat = graph.vertex_count();
    let reduction_percent =
        (1.0 - crate::counting::big_ratio(&BigUint::from(v_hat), &full_states)) * 100.0;

    Ok(ArgdpSolution {
        plan,
        stats: ArgdpStats {
            preprocessing_cost: pre.cost,
            path_cost,
            total_cost,
            reduced_vertices: v_hat,
            reduced_edges: graph.edge_count(),
            full_states,
            reduction_percent,
        },
    })
}
