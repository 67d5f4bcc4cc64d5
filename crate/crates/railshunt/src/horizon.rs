//! Constructive horizon heuristic.
//!
//! Produces a feasible plan in polynomial time and reports its move count
//! `T`, which bounds the number of periods the time-indexed model needs.
//! Track lengths are ignored throughout: the heuristic plans as if every
//! track could hold the whole yard.
//!
//! Phases:
//! 1. merge switch-end runs with a common destination across track pairs
//!    whose indices differ by at most `delta`;
//! 2. consolidate every occupied track onto the lowest occupied one, top to
//!    bottom, leaving dead-end runs of free groups where they are, then
//!    shuffle the remaining free groups out of the train (one move for a
//!    switch-end run, two for a middle run);
//! 3. drop the train's dead-end run off at its destination, one move per
//!    remaining destined run.

use crate::grouping::Workspace;
use crate::yard::{Plan, ShuntMove, TrackId, YardInstance};

#[derive(Debug, Clone)]
pub struct HorizonResult {
    /// Number of shunting moves the heuristic needs; one period each.
    pub t: usize,
    pub plan: Plan,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HorizonError {
    #[error("the horizon heuristic needs at least two classification tracks, found {0}")]
    NeedTwoClassificationTracks(usize),
}

/// Default track-pair index difference for the merge phase.
pub const DEFAULT_DELTA: usize = 2;

pub fn compute_horizon(
    instance: &YardInstance,
    delta: usize,
) -> Result<HorizonResult, HorizonError> {
    let kc = instance.classification_tracks().count();
    if kc < 2 {
        return Err(HorizonError::NeedTwoClassificationTracks(kc));
    }
    let mut ws = Workspace::new(instance, false);

    merge_pairs(&mut ws, delta);
    consolidate_upward(&mut ws);
    if let Some(&h1) = ws.occupied_tracks().first() {
        clear_free_groups(&mut ws, h1);
        drop_off(&mut ws, h1);
    }

    let t = ws.moves.len();
    Ok(HorizonResult {
        t,
        plan: Plan {
            moves: ws.moves,
            total_cost: ws.cost,
        },
    })
}

/// Phase 1: for each occupied track `j` from bottom to top, merge its
/// switch-end run onto the highest track `i < j` within `delta` whose
/// switch-end run has the same destination. Occupancy and switch-end runs
/// are recomputed after every move so merges cascade.
pub(crate) fn merge_pairs(ws: &mut Workspace<'_>, delta: usize) {
    let snapshot = ws.occupied_tracks();
    for &j in snapshot.iter().rev() {
        if ws.occupied_tracks().len() < 2 {
            break;
        }
        let Some(dest_j) = ws.switch_end_dest(j) else {
            continue;
        };
        let partner = ws
            .occupied_tracks()
            .into_iter()
            .filter(|&i| i < j && j - i <= delta && ws.switch_end_dest(i) == Some(dest_j))
            .max();
        if let Some(i) = partner {
            let runs = ws.runs(j);
            let run = runs.last().expect("occupied track");
            ws.perform(j, i, run.len).expect("merge move is legal");
        }
    }
}

/// Phase 2a: move everything except dead-end free runs from each occupied
/// track onto the next occupied track above it, bottom to top.
pub(crate) fn consolidate_upward(ws: &mut Workspace<'_>) {
    let occupied = ws.occupied_tracks();
    for idx in (1..occupied.len()).rev() {
        let src = occupied[idx];
        let dst = occupied[idx - 1];
        let movable = ws.state.track(src).len() - ws.dead_end_free_len(src);
        if movable > 0 {
            ws.perform(src, dst, movable).expect("upward move is legal");
        }
    }
}

/// Phase 2b: clear free groups out of the train on `h1`. The run nearest
/// the switch end goes first; a switch-end run costs one move, a middle run
/// costs two (shuffle out through the scratch track, bring the destined
/// suffix back).
pub(crate) fn clear_free_groups(ws: &mut Workspace<'_>, h1: TrackId) {
    let scratch = ws
        .scratch_classification(h1)
        .expect("two classification tracks");
    loop {
        let runs = ws.runs(h1);
        // Free runs other than the dead-end one; the dead-end run stays put.
        let Some((idx, run)) = runs
            .iter()
            .enumerate()
            .rev()
            .find(|(_, r)| r.is_free() && r.start > 0)
        else {
            break;
        };
        let run = *run;
        let suffix = ws.suffix_len_from_run(h1, idx);
        if suffix == run.len {
            // Switch-end run: shunt it out directly.
            ws.perform(h1, scratch, run.len).expect("clear move");
        } else {
            // Middle run: take everything from the run upward, then bring
            // the destined groups back.
            ws.perform(h1, scratch, suffix).expect("clear move");
            ws.perform(scratch, h1, suffix - run.len).expect("return move");
        }
    }
}

/// Phase 3: repeatedly move the train's active suffix to the destination of
/// its lowest destined run, leaving that run behind. One move per run.
pub(crate) fn drop_off(ws: &mut Workspace<'_>, h1: TrackId) {
    let mut current = h1;
    let mut active = ws.state.track(h1).len() - ws.dead_end_free_len(h1);
    while active > 0 {
        let runs = ws.runs(current);
        let total = ws.state.track(current).len();
        // Lowest run that is part of the active suffix.
        let run = *runs
            .iter()
            .find(|r| r.start + r.len > total - active)
            .expect("active suffix nonempty");
        let dest = match run.dest {
            crate::yard::Destination::Fixed(d) => d,
            crate::yard::Destination::AnyClassification => {
                unreachable!("free groups were cleared before drop-off")
            }
        };
        ws.perform(current, dest, active).expect("drop-off move");
        active -= run.len;
        current = dest;
    }
}

/// Moves of the horizon plan, exposed for callers that only need `T`.
pub fn horizon_moves(instance: &YardInstance, delta: usize) -> Result<Vec<ShuntMove>, HorizonError> {
    Ok(compute_horizon(instance, delta)?.plan.moves)
}
