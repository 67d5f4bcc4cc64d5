//! Closed-form size of the solver's state space and the effect of shrinking
//! an instance.
//!
//! A state assigns every group to a track and orders the groups on each
//! track. With `G` distinct groups over `K` tracks that gives
//! `G! * C(G + K - 1, K - 1)` arrangements; all arrangements in which every
//! destined group already sits on its departure track and every free group
//! sits on some classification track are interchangeable, so all but one of
//! them are removed from the count.

use crate::yard::{Destination, YardInstance};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Parameters the counting formulas need. `n_per_departure[d]` is the number
/// of groups destined to departure track `d` (indexed 0..|K_D|).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateCountParams {
    pub total_groups: u64,
    pub free_groups: u64,
    pub tracks: u64,
    pub classification_tracks: u64,
    pub n_per_departure: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CountError {
    #[error("need at least one classification track")]
    NoClassificationTrack,
    #[error("classification tracks exceed total tracks")]
    TooManyClassificationTracks,
    #[error("invalid reduction: {0}")]
    InvalidReduction(String),
}

impl StateCountParams {
    /// Reads the counting parameters off an instance's initial data.
    pub fn from_instance(instance: &YardInstance) -> Self {
        let departures: Vec<_> = instance.departure_tracks().collect();
        let mut n_per_departure = vec![0u64; departures.len()];
        let mut free_groups = 0u64;
        for g in &instance.groups {
            match g.destination {
                Destination::Fixed(d) => {
                    let slot = departures.iter().position(|&t| t == d).expect("departure");
                    n_per_departure[slot] += 1;
                }
                Destination::AnyClassification => free_groups += 1,
            }
        }
        StateCountParams {
            total_groups: instance.groups.len() as u64,
            free_groups,
            tracks: instance.num_tracks() as u64,
            classification_tracks: instance.classification_tracks().count() as u64,
            n_per_departure,
        }
    }

    fn check(&self) -> Result<(), CountError> {
        if self.classification_tracks == 0 {
            return Err(CountError::NoClassificationTrack);
        }
        if self.classification_tracks > self.tracks {
            return Err(CountError::TooManyClassificationTracks);
        }
        Ok(())
    }

    /// Whether the group bookkeeping adds up (`G = n_N + sum_d n(d)`). The
    /// formulas remain well defined without it, and some published figures
    /// use inconsistent parameter sets, so this is informational only.
    pub fn is_consistent(&self) -> bool {
        self.total_groups == self.free_groups + self.n_per_departure.iter().sum::<u64>()
    }
}

fn factorial(n: u64) -> BigUint {
    let mut out = BigUint::one();
    for i in 2..=n {
        out *= i;
    }
    out
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut out = BigUint::one();
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

fn arrangements(groups: u64, tracks: u64) -> BigUint {
    factorial(groups) * binomial(groups + tracks - 1, tracks - 1)
}

fn final_duplicates(free: u64, classification: u64, n_per_departure: &[u64]) -> BigUint {
    let mut out = arrangements(free, classification);
    for &n in n_per_departure {
        out *= factorial(n);
    }
    out
}

/// Number of distinct states: all arrangements of the groups over the
/// tracks, minus the duplicate sorted arrangements (all but one).
pub fn count_states(p: &StateCountParams) -> Result<BigUint, CountError> {
    p.check()?;
    let total = arrangements(p.total_groups, p.tracks);
    let dup = final_duplicates(p.free_groups, p.classification_tracks, &p.n_per_departure)
        - BigUint::one();
    Ok(total - dup)
}

/// How much the state space shrinks when an instance loses groups or tracks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduction {
    pub ratio: f64,
    pub percent_decrease: f64,
}

/// State-space ratio after removing `cut_free` free groups, `cut_per_departure[d]`
/// destined groups per departure track, and `cut_tracks` classification
/// tracks. Zero means that dimension is unchanged.
pub fn state_reduction(
    p: &StateCountParams,
    cut_per_departure: &[u64],
    cut_free: u64,
    cut_tracks: u64,
) -> Result<Reduction, CountError> {
    p.check()?;
    if cut_per_departure.len() != p.n_per_departure.len() {
        return Err(CountError::InvalidReduction(format!(
            "expected {} per-departure cuts, got {}",
            p.n_per_departure.len(),
            cut_per_departure.len()
        )));
    }
    for (d, (&q, &n)) in cut_per_departure.iter().zip(&p.n_per_departure).enumerate() {
        if q > n {
            return Err(CountError::InvalidReduction(format!(
                "cut {q} groups from departure {d} which only has {n}"
            )));
        }
    }
    if cut_free > p.free_groups {
        return Err(CountError::InvalidReduction(format!(
            "cut {cut_free} free groups but only {} exist",
            p.free_groups
        )));
    }
    if cut_tracks + 1 > p.classification_tracks {
        return Err(CountError::InvalidReduction(format!(
            "cut {cut_tracks} classification tracks but only {} exist (one must remain)",
            p.classification_tracks
        )));
    }
    let q_total: u64 = cut_per_departure.iter().sum();
    let reduced = StateCountParams {
        total_groups: p.total_groups - cut_free - q_total,
        free_groups: p.free_groups - cut_free,
        tracks: p.tracks - cut_tracks,
        classification_tracks: p.classification_tracks - cut_tracks,
        n_per_departure: p
            .n_per_departure
            .iter()
            .zip(cut_per_departure)
            .map(|(&n, &q)| n - q)
            .collect(),
    };
    let original = count_states(p)?;
    let shrunk = count_states(&reduced)?;
    let ratio = big_ratio(&shrunk, &original);
    Ok(Reduction {
        ratio,
        percent_decrease: (1.0 - ratio) * 100.0,
    })
}

pub(crate) fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    let n = num.to_f64().unwrap_or(f64::INFINITY);
    let d = den.to_f64().unwrap_or(f64::INFINITY);
    if d == 0.0 {
        return 0.0;
    }
    n / d
}
