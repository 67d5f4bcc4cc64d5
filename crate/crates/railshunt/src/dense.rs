//! Compact instance/state encodings used by the search-based solvers.
//!
//! Group and track ids are mapped to small integers so that states can be
//! hashed as flat byte strings. Track byte `0xFE` separates tracks inside an
//! encoded state; group ids must therefore stay below `SEP`.

use crate::yard::{Destination, GroupId, ShuntMove, TrackKind, YardInstance};
use std::fmt;

pub(crate) const SEP: u8 = 0xFE;

/// Hard limit on groups/tracks for the byte encodings.
pub(crate) const MAX_IDS: usize = 250;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("instance too large for the search encoding ({0} > {MAX_IDS})")]
    TooLarge(usize),
    #[error("group {0:?} missing from the initial state")]
    MissingGroup(GroupId),
}

/// Instance with dense u8 group ids and per-track data in flat arrays.
pub(crate) struct Dense {
    pub tracks: usize,
    pub kinds: Vec<TrackKind>,
    pub capacity: Vec<f64>,
    pub cost: Vec<f64>, // row-major tracks x tracks
    pub group_len: Vec<f64>,
    /// Fixed destination track per group, `None` for free groups.
    pub dest: Vec<Option<u8>>,
    pub group_names: Vec<GroupId>,
    pub initial: RawState,
    /// Nearest classification track from each track (cheapest by cost), used
    /// for distance-to-go of free groups.
    pub nearest_classification: Vec<f64>,
}

impl Dense {
    pub fn new(instance: &YardInstance) -> Result<Self, EncodeError> {
        let k = instance.num_tracks();
        if k > MAX_IDS {
            return Err(EncodeError::TooLarge(k));
        }
        if instance.groups.len() > MAX_IDS {
            return Err(EncodeError::TooLarge(instance.groups.len()));
        }
        let kinds: Vec<TrackKind> = instance.tracks.iter().map(|t| t.kind).collect();
        let capacity = instance.tracks.iter().map(|t| t.capacity).collect();
        let mut cost = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                cost[i * k + j] = instance.cost[i][j];
            }
        }
        let group_names: Vec<GroupId> = instance.groups.iter().map(|g| g.id.clone()).collect();
        let group_len = instance.groups.iter().map(|g| g.length).collect();
        let dest = instance
            .groups
            .iter()
            .map(|g| match g.destination {
                Destination::Fixed(d) => Some(d as u8),
                Destination::AnyClassification => None,
            })
            .collect();
        let mut tracks_vec: Vec<Vec<u8>> = vec![Vec::new(); k];
        for (track, seq) in instance.initial.iter() {
            for id in seq {
                let gid = group_names
                    .iter()
                    .position(|n| n == id)
                    .ok_or_else(|| EncodeError::MissingGroup(id.clone()))?;
                tracks_vec[track].push(gid as u8);
            }
        }
        let nearest_classification = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| kinds[j] == TrackKind::Classification)
                    .map(|j| if i == j { 0.0 } else { cost[i * k + j] })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        Ok(Dense {
            tracks: k,
            kinds,
            capacity,
            cost,
            group_len,
            dest,
            group_names,
            initial: RawState::from_tracks(&tracks_vec),
            nearest_classification,
        })
    }

    #[inline]
    pub fn cost(&self, src: usize, dst: usize) -> f64 {
        self.cost[src * self.tracks + dst]
    }

    /// True when every destined group is on its destination and every free
    /// group is on a classification track.
    pub fn is_final(&self, state: &RawState) -> bool {
        for (track, seq) in state.tracks(self.tracks).enumerate() {
            for &g in seq {
                match self.dest[g as usize] {
                    Some(d) => {
                        if d as usize != track {
                            return false;
                        }
                    }
                    None => {
                        if self.kinds[track] != TrackKind::Classification {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Flat byte encoding of a state: group ids per track, tracks separated by
/// [`SEP`]. The number of tracks is fixed by the instance, so the encoding is
/// canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct RawState(pub Box<[u8]>);

impl fmt::Debug for RawState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .split(|&b| b == SEP)
            .map(|seq| {
                seq.iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "[{}]", parts.join(" | "))
    }
}

impl RawState {
    pub fn from_tracks(tracks: &[Vec<u8>]) -> Self {
        let mut buf = Vec::with_capacity(tracks.iter().map(Vec::len).sum::<usize>() + tracks.len());
        for (i, t) in tracks.iter().enumerate() {
            if i > 0 {
                buf.push(SEP);
            }
            buf.extend_from_slice(t);
        }
        RawState(buf.into_boxed_slice())
    }

    pub fn tracks(&self, _count: usize) -> impl Iterator<Item = &[u8]> {
        self.0.split(|&b| b == SEP)
    }

    pub fn to_vecs(&self, count: usize) -> Vec<Vec<u8>> {
        let mut out: Vec<Vec<u8>> = self.tracks(count).map(<[u8]>::to_vec).collect();
        while out.len() < count {
            out.push(Vec::new());
        }
        out
    }

    /// Applies `(src, dst, count)` without legality checks beyond bounds; the
    /// caller enumerates only legal moves.
    pub fn apply(&self, tracks: usize, mv: DenseMove) -> RawState {
        let mut vecs = self.to_vecs(tracks);
        let src = &mut vecs[mv.src as usize];
        let tail = src.split_off(src.len() - mv.count as usize);
        vecs[mv.dst as usize].extend_from_slice(&tail);
        RawState::from_tracks(&vecs)
    }
}

/// Packed move used inside the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct DenseMove {
    pub src: u8,
    pub dst: u8,
    pub count: u16,
}

impl DenseMove {
    pub fn to_shunt(self) -> ShuntMove {
        ShuntMove {
            src: self.src as usize,
            dst: self.dst as usize,
            count: self.count as usize,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::yard::{build_instance, CarGroup, TrackKind::*, YardState};

    #[test]
    fn encode_apply_decode() {
        let groups = vec![
            CarGroup {
                id: "a".into(),
                length: 1.0,
                destination: Destination::Fixed(0),
            },
            CarGroup {
                id: "b".into(),
                length: 1.0,
                destination: Destination::AnyClassification,
            },
        ];
        let mut init = YardState::new(3);
        init.track_mut(1).extend(["a".to_string(), "b".to_string()]);
        let inst = build_instance(&[Departure, Classification, Classification], 9.0, groups, init);
        let dense = Dense::new(&inst).unwrap();
        let next = dense.initial.apply(
            3,
            DenseMove {
                src: 1,
                dst: 2,
                count: 1,
            },
        );
        let vecs = next.to_vecs(3);
        assert_eq!(vecs, vec![vec![], vec![0], vec![1]]);
        assert!(!dense.is_final(&dense.initial));
        assert!(dense.is_final(&dense.initial.apply(
            3,
            DenseMove {
                src: 1,
                dst: 0,
                count: 2,
            },
        )) == false);
    }
}
