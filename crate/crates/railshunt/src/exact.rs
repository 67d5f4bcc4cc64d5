//! Exact minimum-cost solver.
//!
//! States are full yard configurations; an edge is one legal shunting move
//! weighted by its track-pair cost. Every configuration in which all groups
//! have reached their destinations is collapsed into a single sink vertex,
//! which is never expanded. The default strategy runs a best-first search
//! over lazily generated states ordered by `(cost, move count)`; with
//! nonnegative costs this settles the sink with the optimal value while
//! expanding far fewer states than a full layered sweep. The layered
//! strategy builds the graph breadth-first layer by layer and then relaxes
//! labels to a fixed point; it exists to cross-check the best-first result.
//!
//! Ties are broken toward fewer moves, then toward the lexicographically
//! smallest move list, which keeps the reported plan deterministic and rules
//! out zero-cost cycles.

use crate::dense::{Dense, DenseMove, EncodeError, RawState};
use crate::yard::{Plan, TrackKind, YardInstance};
use rustc_hash::FxHashMap;
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Dijkstra-style best-first over lazily generated states (default).
    BestFirst,
    /// Layer-by-layer construction of the full reachable graph followed by
    /// label relaxation to a fixed point.
    Layered,
}

#[derive(Debug, Clone)]
pub struct ExactConfig {
    /// Abort with [`ExactError::ResourceLimit`] once this many distinct
    /// states exist.
    pub max_states: usize,
    pub strategy: Strategy,
    /// Keep expanding after the sink settles (implied by `Layered`); needed
    /// when the full graph is wanted, e.g. for a DOT dump.
    pub exhaustive: bool,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            max_states: 5_000_000,
            strategy: Strategy::BestFirst,
            exhaustive: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExactError {
    #[error("no final state is reachable")]
    Unsolvable,
    #[error("state limit exceeded ({states} states)")]
    ResourceLimit { states: usize },
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

#[derive(Debug, Clone, Default)]
pub struct ExactStats {
    /// Distinct states created, the collapsed sink included.
    pub states: usize,
    /// States whose outgoing moves were enumerated.
    pub expanded: usize,
    pub edges: usize,
}

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub plan: Plan,
    pub stats: ExactStats,
}

pub fn solve_exact(
    instance: &YardInstance,
    config: &ExactConfig,
) -> Result<ExactSolution, ExactError> {
    let dense = Dense::new(instance)?;
    let mut search = Search::new(&dense, config.max_states);
    match config.strategy {
        Strategy::BestFirst => search.best_first(config.exhaustive)?,
        Strategy::Layered => search.layered()?,
    }
    search.extract_plan()
}

/// Renders the full reachable state graph in DOT format. Only sensible for
/// desk-size instances; the state cap still applies.
pub fn render_dot(instance: &YardInstance, config: &ExactConfig) -> Result<String, ExactError> {
    let dense = Dense::new(instance)?;
    let mut search = Search::new(&dense, config.max_states);
    search.record_edges = true;
    match config.strategy {
        Strategy::Layered => search.layered()?,
        Strategy::BestFirst => search.best_first(true)?,
    }
    let mut out = String::from("digraph states {\n  rankdir=LR;\n");
    for (idx, node) in search.nodes.iter().enumerate() {
        let label = if idx == SINK as usize {
            "final".to_string()
        } else {
            format!("{:?}", node.key)
        };
        let _ = writeln!(
            out,
            "  n{} [label=\"{}\\ncost={}\"];",
            idx, label, node.dist
        );
    }
    for &(from, to, mv, cost) in &search.edges {
        let _ = writeln!(
            out,
            "  n{} -> n{} [label=\"{} c={}\"];",
            from,
            to,
            mv.to_shunt(),
            cost
        );
    }
    out.push_str("}\n");
    Ok(out)
}

const SINK: u32 = 0;
const UNREACHED: f64 = f64::INFINITY;

struct Node {
    key: RawState,
    dist: f64,
    moves: u32,
    pred: Option<(u32, DenseMove)>,
    settled: bool,
}

struct Search<'a> {
    dense: &'a Dense,
    nodes: Vec<Node>,
    index: FxHashMap<RawState, u32>,
    max_states: usize,
    record_edges: bool,
    edges: Vec<(u32, u32, DenseMove, f64)>,
    stats: ExactStats,
    root: u32,
}

impl<'a> Search<'a> {
    fn new(dense: &'a Dense, max_states: usize) -> Self {
        // Slot 0 is reserved for the collapsed sink even before any final
        // state has been generated.
        let mut nodes = Vec::new();
        nodes.push(Node {
            key: RawState(Box::new([])),
            dist: UNREACHED,
            moves: 0,
            pred: None,
            settled: false,
        });
        let mut search = Search {
            dense,
            nodes,
            index: FxHashMap::default(),
            max_states,
            record_edges: false,
            edges: Vec::new(),
            stats: ExactStats::default(),
            root: 0,
        };
        let root_key = dense.initial.clone();
        search.root = if dense.is_final(&root_key) {
            SINK
        } else {
            search.intern(root_key).expect("root fits any cap")
        };
        let root = search.root as usize;
        search.nodes[root].dist = 0.0;
        search.nodes[root].moves = 0;
        search
    }

    fn intern(&mut self, key: RawState) -> Result<u32, ExactError> {
        if let Some(&idx) = self.index.get(&key) {
            return Ok(idx);
        }
        if self.nodes.len() >= self.max_states {
            return Err(ExactError::ResourceLimit {
                states: self.nodes.len(),
            });
        }
        let idx = self.nodes.len() as u32;
        self.nodes.push(Node {
            key: key.clone(),
            dist: UNREACHED,
            moves: 0,
            pred: None,
            settled: false,
        });
        self.index.insert(key, idx);
        Ok(idx)
    }

    /// Legal moves from a raw state in ascending (src, dst, count) order.
    fn moves_from(&self, state: &RawState) -> Vec<(DenseMove, f64)> {
        let k = self.dense.tracks;
        let tracks = state.to_vecs(k);
        let loads: Vec<f64> = tracks
            .iter()
            .map(|seq| seq.iter().map(|&g| self.dense.group_len[g as usize]).sum())
            .collect();
        let mut out = Vec::new();
        for src in 0..k {
            if tracks[src].is_empty() {
                continue;
            }
            for dst in 0..k {
                if dst == src {
                    continue;
                }
                let cost = self.dense.cost(src, dst);
                let mut load = loads[dst];
                for count in 1..=tracks[src].len() {
                    load += self.dense.group_len[tracks[src][tracks[src].len() - count] as usize];
                    if load > self.dense.capacity[dst] + 1e-9 {
                        break;
                    }
                    out.push((
                        DenseMove {
                            src: src as u8,
                            dst: dst as u8,
                            count: count as u16,
                        },
                        cost,
                    ));
                }
            }
        }
        out
    }

    /// Lexicographic move list of the path from the root to `idx`, assuming
    /// the candidate predecessor edge `(pred, mv)` for the last hop.
    fn path_with(&self, pred: u32, mv: DenseMove) -> Vec<DenseMove> {
        let mut path = vec![mv];
        let mut cur = pred;
        while let Some((p, m)) = self.nodes[cur as usize].pred {
            path.push(m);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Relaxes the edge `pred -> idx`, preferring lower cost, then fewer
    /// moves, then the lexicographically smaller move list.
    fn relax(&mut self, idx: u32, pred: u32, mv: DenseMove, cost: f64) -> bool {
        let cand_dist = self.nodes[pred as usize].dist + cost;
        let cand_moves = self.nodes[pred as usize].moves + 1;
        let node = &self.nodes[idx as usize];
        let better = cand_dist < node.dist
            || (cand_dist == node.dist && cand_moves < node.moves)
            || (cand_dist == node.dist
                && cand_moves == node.moves
                && node.pred.is_some_and(|(old_pred, old_mv)| {
                    self.path_with(pred, mv) < self.path_with(old_pred, old_mv)
                }));
        if better {
            let node = &mut self.nodes[idx as usize];
            node.dist = cand_dist;
            node.moves = cand_moves;
            node.pred = Some((pred, mv));
        }
        better
    }

    fn best_first(&mut self, exhaustive: bool) -> Result<(), ExactError> {
        let mut heap: BinaryHeap<Reverse<(u64, u32, u32)>> = BinaryHeap::new();
        let root = self.root;
        heap.push(Reverse((key_of(0.0), 0, root)));
        while let Some(Reverse((_, _, idx))) = heap.pop() {
            if self.nodes[idx as usize].settled {
                continue;
            }
            self.nodes[idx as usize].settled = true;
            if idx == SINK {
                if exhaustive {
                    continue; // the sink has no successors
                }
                return Ok(());
            }
            self.stats.expanded += 1;
            let state = self.nodes[idx as usize].key.clone();
            for (mv, cost) in self.moves_from(&state) {
                let child_key = state.apply(self.dense.tracks, mv);
                let child = if self.dense.is_final(&child_key) {
                    SINK
                } else {
                    self.intern(child_key)?
                };
                self.stats.edges += 1;
                if self.record_edges {
                    self.edges.push((idx, child, mv, cost));
                }
                if !self.nodes[child as usize].settled && self.relax(child, idx, mv, cost) {
                    let n = &self.nodes[child as usize];
                    heap.push(Reverse((key_of(n.dist), n.moves, child)));
                }
            }
        }
        Ok(())
    }

    /// Layer-by-layer expansion: layer `t` holds states whose minimum move
    /// count from the root is `t`. Labels are corrected whenever an edge
    /// reaches an existing vertex, then swept to a fixed point at the end.
    fn layered(&mut self) -> Result<(), ExactError> {
        let mut frontier = vec![self.root];
        let mut all_edges: Vec<(u32, u32, DenseMove, f64)> = Vec::new();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &idx in &frontier {
                if idx == SINK {
                    continue;
                }
                self.stats.expanded += 1;
                let state = self.nodes[idx as usize].key.clone();
                for (mv, cost) in self.moves_from(&state) {
                    let child_key = state.apply(self.dense.tracks, mv);
                    let is_new = !self.dense.is_final(&child_key)
                        && !self.index.contains_key(&child_key);
                    let child = if self.dense.is_final(&child_key) {
                        SINK
                    } else {
                        self.intern(child_key)?
                    };
                    self.stats.edges += 1;
                    all_edges.push((idx, child, mv, cost));
                    if self.record_edges {
                        self.edges.push((idx, child, mv, cost));
                    }
                    self.relax(child, idx, mv, cost);
                    if is_new {
                        next.push(child);
                    }
                }
            }
            frontier = next;
        }
        // Label correction on vertex discovery is order-dependent; sweep to
        // the fixed point so every label is the true shortest-path value.
        loop {
            let mut changed = false;
            for &(from, to, mv, cost) in &all_edges {
                if self.nodes[from as usize].dist < UNREACHED && self.relax(to, from, mv, cost) {
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(())
    }

    fn extract_plan(&mut self) -> Result<ExactSolution, ExactError> {
        self.stats.states = self.nodes.len();
        if self.root == SINK {
            return Ok(ExactSolution {
                plan: Plan::empty(),
                stats: self.stats.clone(),
            });
        }
        if self.nodes[SINK as usize].dist == UNREACHED {
            return Err(ExactError::Unsolvable);
        }
        let mut moves = Vec::new();
        let mut cur = SINK;
        while let Some((pred, mv)) = self.nodes[cur as usize].pred {
            moves.push(mv.to_shunt());
            cur = pred;
        }
        moves.reverse();
        Ok(ExactSolution {
            plan: Plan {
                moves,
                total_cost: self.nodes[SINK as usize].dist,
            },
            stats: self.stats.clone(),
        })
    }
}

/// Monotone integer key for nonnegative finite f64 costs, so the binary heap
/// can order labels without a float wrapper.
#[inline]
fn key_of(cost: f64) -> u64 {
    debug_assert!(cost >= 0.0 && cost.is_finite());
    cost.to_bits()
}

/// Requires at least two classification tracks or one per free group; a
/// cheap reachability sanity check used by callers that want a clear error
/// before searching.
pub fn quick_feasibility(instance: &YardInstance) -> bool {
    instance
        .tracks
        .iter()
        .any(|t| t.kind == TrackKind::Classification)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::yard::{build_instance, CarGroup, Destination, ShuntMove, TrackKind::*, YardState};

    fn groups(spec: &[(&str, Option<usize>)]) -> Vec<CarGroup> {
        spec.iter()
            .map(|(id, d)| CarGroup {
                id: (*id).to_string(),
                length: 1.0,
                destination: match d {
                    Some(t) => Destination::Fixed(*t),
                    None => Destination::AnyClassification,
                },
            })
            .collect()
    }

    #[test]
    fn already_final_returns_empty_plan() {
        let inst = build_instance(
            &[Departure, Classification, Classification],
            9.0,
            groups(&[("a", None)]),
            {
                let mut s = YardState::new(3);
                s.track_mut(1).push("a".into());
                s
            },
        );
        let sol = solve_exact(&inst, &ExactConfig::default()).unwrap();
        assert!(sol.plan.moves.is_empty());
        assert_eq!(sol.plan.total_cost, 0.0);
    }

    #[test]
    fn single_forced_move() {
        let inst = build_instance(
            &[Departure, Classification, Classification],
            9.0,
            groups(&[("a", Some(0))]),
            {
                let mut s = YardState::new(3);
                s.track_mut(2).push("a".into());
                s
            },
        );
        let sol = solve_exact(&inst, &ExactConfig::default()).unwrap();
        assert_eq!(
            sol.plan.moves,
            vec![ShuntMove {
                src: 2,
                dst: 0,
                count: 1
            }]
        );
        assert_eq!(sol.plan.total_cost, 2.0);
    }

    #[test]
    fn layered_matches_best_first() {
        let inst = build_instance(
            &[Departure, Departure, Classification, Classification],
            9.0,
            groups(&[("a", Some(1)), ("b", Some(0)), ("c", None)]),
            {
                let mut s = YardState::new(4);
                s.track_mut(2)
                    .extend(["a".to_string(), "c".to_string(), "b".to_string()]);
                s
            },
        );
        let best = solve_exact(&inst, &ExactConfig::default()).unwrap();
        let layered = solve_exact(
            &inst,
            &ExactConfig {
                strategy: Strategy::Layered,
                ..ExactConfig::default()
            },
        )
        .unwrap();
        assert_eq!(best.plan.total_cost, layered.plan.total_cost);
        let replay = crate::yard::replay_plan(&inst, &best.plan, true).unwrap();
        assert!(crate::yard::is_final(&replay, &inst));
    }

    #[test]
    fn resource_limit_reported() {
        let inst = build_instance(
            &[Departure, Classification, Classification, Classification],
            9.0,
            groups(&[("a", Some(0)), ("b", Some(0)), ("c", Some(0))]),
            {
                let mut s = YardState::new(4);
                s.track_mut(1)
                    .extend(["a".to_string(), "b".to_string(), "c".to_string()]);
                s
            },
        );
        let err = solve_exact(
            &inst,
            &ExactConfig {
                max_states: 3,
                ..ExactConfig::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, ExactError::ResourceLimit { .. }));
    }

    #[test]
    fn dot_dump_mentions_final() {
        let inst = build_instance(
            &[Departure, Classification, Classification],
            9.0,
            groups(&[("a", Some(0))]),
            {
                let mut s = YardState::new(3);
                s.track_mut(1).push("a".into());
                s
            },
        );
        let dot = render_dot(&inst, &ExactConfig::default()).unwrap();
        assert!(dot.contains("digraph"));
        assert!(dot.contains("final"));
    }
}
