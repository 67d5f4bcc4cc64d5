//! Working view of a yard state in terms of *logical* groups: maximal runs
//! of adjacent groups on one track that share a destination. The heuristics
//! reason about logical groups (a merged run moves as one unit) while the
//! emitted moves stay in raw group counts so plans replay through the plain
//! move semantics.

use crate::yard::{
    apply_move, apply_move_unchecked_capacity, Destination, MoveError, ShuntMove, TrackId,
    YardInstance, YardState,
};

/// One maximal same-destination run on a track.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Run {
    /// Raw index of the first (dead-end-most) member on the track.
    pub start: usize,
    /// Number of raw groups in the run.
    pub len: usize,
    pub dest: Destination,
}

impl Run {
    pub fn is_free(&self) -> bool {
        self.dest == Destination::AnyClassification
    }
}

/// Mutable working state that records the moves it performs.
pub(crate) struct Workspace<'a> {
    pub instance: &'a YardInstance,
    pub state: YardState,
    pub moves: Vec<ShuntMove>,
    pub cost: f64,
    pub enforce_capacity: bool,
    /// Set when a capacity-checked move had to be skipped; phases stop here
    /// and leave the rest to the graph search.
    pub aborted: bool,
}

impl<'a> Workspace<'a> {
    pub fn new(instance: &'a YardInstance, enforce_capacity: bool) -> Self {
        let mut state = instance.initial.clone();
        state.pad_tracks(instance.num_tracks());
        Workspace {
            instance,
            state,
            moves: Vec::new(),
            cost: 0.0,
            enforce_capacity,
            aborted: false,
        }
    }

    /// Like [`Workspace::perform`] but turns a capacity rejection into an
    /// abort flag instead of an error. Structural errors still panic: the
    /// phases only request moves that exist.
    pub fn try_perform(&mut self, src: TrackId, dst: TrackId, raw_count: usize) -> bool {
        if self.aborted {
            return false;
        }
        match self.perform(src, dst, raw_count) {
            Ok(()) => true,
            Err(MoveError::CapacityExceeded { .. }) => {
                self.aborted = true;
                false
            }
            Err(e) => panic!("heuristic requested an impossible move: {e}"),
        }
    }

    fn destination_of(&self, group: &str) -> Destination {
        self.instance
            .group(group)
            .map(|g| g.destination)
            .unwrap_or(Destination::AnyClassification)
    }

    /// Maximal same-destination runs on `track`, dead-end-first.
    pub fn runs(&self, track: TrackId) -> Vec<Run> {
        let seq = self.state.track(track);
        let mut out: Vec<Run> = Vec::new();
        for (i, id) in seq.iter().enumerate() {
            let dest = self.destination_of(id);
            match out.last_mut() {
                Some(run) if run.dest == dest => run.len += 1,
                _ => out.push(Run {
                    start: i,
                    len: 1,
                    dest,
                }),
            }
        }
        out
    }

    /// Raw length of the maximal run of free groups at the dead end.
    pub fn dead_end_free_len(&self, track: TrackId) -> usize {
        self.state
            .track(track)
            .iter()
            .take_while(|id| self.destination_of(id) == Destination::AnyClassification)
            .count()
    }

    /// Destination of the switch-end run when it is a destined run.
    pub fn switch_end_dest(&self, track: TrackId) -> Option<TrackId> {
        match self.runs(track).last()?.dest {
            Destination::Fixed(d) => Some(d),
            Destination::AnyClassification => None,
        }
    }

    /// Destination of the dead-end run when it is a destined run.
    pub fn dead_end_dest(&self, track: TrackId) -> Option<TrackId> {
        match self.runs(track).first()?.dest {
            Destination::Fixed(d) => Some(d),
            Destination::AnyClassification => None,
        }
    }

    /// Classification tracks that currently hold at least one destined
    /// group, ascending by track id.
    pub fn occupied_tracks(&self) -> Vec<TrackId> {
        self.instance
            .classification_tracks()
            .filter(|&t| {
                self.state
                    .track(t)
                    .iter()
                    .any(|id| self.destination_of(id) != Destination::AnyClassification)
            })
            .collect()
    }

    /// Moves the topmost `raw_count` groups from `src` to `dst`, recording
    /// the move and its cost.
    pub fn perform(&mut self, src: TrackId, dst: TrackId, raw_count: usize) -> Result<(), MoveError> {
        let mv = ShuntMove {
            src,
            dst,
            count: raw_count,
        };
        self.state = if self.enforce_capacity {
            apply_move(&self.state, mv, self.instance)?
        } else {
            apply_move_unchecked_capacity(&self.state, mv, self.instance)?
        };
        self.cost += self.instance.move_cost(src, dst);
        self.moves.push(mv);
        Ok(())
    }

    /// Raw size of the suffix starting at run index `run_idx` on `track`.
    pub fn suffix_len_from_run(&self, track: TrackId, run_idx: usize) -> usize {
        let runs = self.runs(track);
        let seq_len = self.state.track(track).len();
        seq_len - runs[run_idx].start
    }

    /// The nearest classification track other than `track`, preferring
    /// `track + 1`, then `track - 1`, then the cheapest remaining one.
    pub fn scratch_classification(&self, track: TrackId) -> Option<TrackId> {
        let below = track + 1;
        if self.instance.is_classification(below) {
            return Some(below);
        }
        if track > 0 && self.instance.is_classification(track - 1) {
            return Some(track - 1);
        }
        self.instance
            .classification_tracks()
            .filter(|&t| t != track)
            .min_by(|&a, &b| {
                self.instance
                    .move_cost(track, a)
                    .total_cmp(&self.instance.move_cost(track, b))
            })
    }

    /// Neighbor track used for blocker shuffles: `i - 1`, except that `i + 1`
    /// takes over when it is empty of destined groups while `i - 1` is not.
    /// Only classification tracks qualify; `None` when no other
    /// classification track exists.
    pub fn neighbor(&self, track: TrackId) -> Option<TrackId> {
        let up = if track > 0 && self.instance.is_classification(track - 1) {
            Some(track - 1)
        } else {
            None
        };
        let down = if self.instance.is_classification(track + 1) {
            Some(track + 1)
        } else {
            None
        };
        match (up, down) {
            (Some(u), Some(d)) => {
                if self.is_effectively_empty(d) && !self.is_effectively_empty(u) {
                    Some(d)
                } else {
                    Some(u)
                }
            }
            (Some(u), None) => Some(u),
            (None, Some(d)) => Some(d),
            (None, None) => self.scratch_classification(track),
        }
    }

    /// A track is treated as empty when it holds no destined groups.
    pub fn is_effectively_empty(&self, track: TrackId) -> bool {
        self.state
            .track(track)
            .iter()
            .all(|id| self.destination_of(id) == Destination::AnyClassification)
    }

    /// Lowest-id classification track.
    pub fn top_classification(&self) -> Option<TrackId> {
        self.instance.classification_tracks().min()
    }
}
