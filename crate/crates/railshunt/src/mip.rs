//! Time-indexed integer model of the shunting problem.
//!
//! The model tracks, for each period `t = 1..=T`, which track every group
//! occupies (`x`), which track pair the locomotive serves (`v`), which
//! groups ride along (`y`), per-track group counts and their in/out flows
//! (`N`, `N+`, `N-`), per-group positions and their signed changes (`P`,
//! `D+`, `D-`), and the termination indicators (`w`, `u`). Constraint rows
//! carry their family number (2..=28) so violations point back to the
//! corresponding part of the formulation. The `z` change indicator is
//! substituted out as the row sum of `y`.
//!
//! No solver is embedded: models are exported as MPS text for external
//! solvers, and candidate plans are verified row by row with
//! [`check_feasibility`].

use crate::yard::{Destination, Plan, TrackKind, YardInstance, YardState};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    /// Group `g` sits on track `i` at the end of period `t`.
    X { g: usize, i: usize, t: usize },
    /// Group `g` moves from `i` to `j` in period `t`.
    Y { g: usize, i: usize, j: usize, t: usize },
    /// The locomotive serves `i -> j` in period `t`.
    V { i: usize, j: usize, t: usize },
    /// All groups are home at the end of period `t`.
    W { t: usize },
    /// Period `t` is the first all-home period.
    U { t: usize },
    /// Number of groups on track `i` at the end of period `t`.
    N { i: usize, t: usize },
    NPlus { i: usize, t: usize },
    NMinus { i: usize, t: usize },
    DPlus { g: usize, t: usize },
    DMinus { g: usize, t: usize },
    /// 1-based position of group `g` on its track at the end of period `t`.
    P { g: usize, t: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// One constraint row: `sum(terms) sense rhs`.
#[derive(Debug, Clone)]
pub struct Row {
    pub name: String,
    /// Constraint family in the formulation (2..=26).
    pub family: u8,
    pub sense: Sense,
    pub rhs: f64,
    pub terms: Vec<(Var, f64)>,
}

#[derive(Debug, Clone)]
pub struct MipModel {
    pub groups: usize,
    pub tracks: usize,
    pub horizon: usize,
    /// Big-M for position-change rows: twice the group count.
    pub m1: f64,
    /// Big-M for move-selection rows: the group count.
    pub m2: f64,
    group_len: Vec<f64>,
    capacity: Vec<f64>,
    cost: Vec<Vec<f64>>,
    dest: Vec<Option<usize>>,
    classification: Vec<usize>,
    x0: Vec<Vec<bool>>,
    n0: Vec<f64>,
    p0: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MipError {
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("plan has {moves} moves but the horizon is {horizon}")]
    PlanTooLong { moves: usize, horizon: usize },
}

/// Builds the full model for `instance` over `horizon` periods; period-0
/// occupancies, counts and positions are data taken from the initial state.
pub fn build_mip(instance: &YardInstance, horizon: usize) -> Result<MipModel, MipError> {
    if horizon == 0 {
        return Err(MipError::ZeroHorizon);
    }
    let g_count = instance.groups.len();
    let k = instance.num_tracks();
    let mut x0 = vec![vec![false; k]; g_count];
    let mut n0 = vec![0.0; k];
    let mut p0 = vec![0.0; g_count];
    for (track, seq) in instance.initial.iter() {
        n0[track] = seq.len() as f64;
        for (pos, id) in seq.iter().enumerate() {
            let g = instance
                .groups
                .iter()
                .position(|cg| cg.id == *id)
                .expect("initial groups exist");
            x0[g][track] = true;
            p0[g] = (pos + 1) as f64;
        }
    }
    Ok(MipModel {
        groups: g_count,
        tracks: k,
        horizon,
        m1: 2.0 * g_count as f64,
        m2: g_count as f64,
        group_len: instance.groups.iter().map(|cg| cg.length).collect(),
        capacity: instance.tracks.iter().map(|t| t.capacity).collect(),
        cost: instance.cost.clone(),
        dest: instance
            .groups
            .iter()
            .map(|cg| match cg.destination {
                Destination::Fixed(d) => Some(d),
                Destination::AnyClassification => None,
            })
            .collect(),
        classification: instance
            .tracks
            .iter()
            .filter(|t| t.kind == TrackKind::Classification)
            .map(|t| t.id)
            .collect(),
        x0,
        n0,
        p0,
    })
}

impl MipModel {
    /// Linear objective: the served track pair's cost in every period.
    pub fn objective(&self) -> Vec<(Var, f64)> {
        let mut out = Vec::new();
        for t in 1..=self.horizon {
            for i in 0..self.tracks {
                for j in 0..self.tracks {
                    if i != j {
                        out.push((Var::V { i, j, t }, self.cost[i][j]));
                    }
                }
            }
        }
        out
    }

    pub fn var_count(&self) -> usize {
        let (g, k, t) = (self.groups, self.tracks, self.horizon);
        g * k * t + g * k * k * t + k * k * t + 2 * t + 3 * k * t + 3 * g * t
    }

    /// Number of `y` variables with valid indices (`j != i`).
    pub fn y_count(&self) -> usize {
        self.groups * self.tracks * (self.tracks - 1) * self.horizon
    }

    /// Dense index of a variable; `y`/`v` diagonals are never used.
    pub fn index(&self, var: Var) -> usize {
        let (g_n, k, t_n) = (self.groups, self.tracks, self.horizon);
        let x_len = g_n * k * t_n;
        let y_len = g_n * k * k * t_n;
        let v_len = k * k * t_n;
        let kt = k * t_n;
        let gt = g_n * t_n;
        match var {
            Var::X { g, i, t } => (g * k + i) * t_n + (t - 1),
            Var::Y { g, i, j, t } => x_len + ((g * k + i) * k + j) * t_n + (t - 1),
            Var::V { i, j, t } => x_len + y_len + (i * k + j) * t_n + (t - 1),
            Var::W { t } => x_len + y_len + v_len + (t - 1),
            Var::U { t } => x_len + y_len + v_len + t_n + (t - 1),
            Var::N { i, t } => x_len + y_len + v_len + 2 * t_n + i * t_n + (t - 1),
            Var::NPlus { i, t } => x_len + y_len + v_len + 2 * t_n + kt + i * t_n + (t - 1),
            Var::NMinus { i, t } => x_len + y_len + v_len + 2 * t_n + 2 * kt + i * t_n + (t - 1),
            Var::DPlus { g, t } => x_len + y_len + v_len + 2 * t_n + 3 * kt + g * t_n + (t - 1),
            Var::DMinus { g, t } => {
                x_len + y_len + v_len + 2 * t_n + 3 * kt + gt + g * t_n + (t - 1)
            }
            Var::P { g, t } => {
                x_len + y_len + v_len + 2 * t_n + 3 * kt + 2 * gt + g * t_n + (t - 1)
            }
        }
    }

    pub fn is_binary(&self, var: Var) -> bool {
        matches!(
            var,
            Var::X { .. } | Var::Y { .. } | Var::V { .. } | Var::W { .. } | Var::U { .. }
        )
    }

    /// All variables in index order.
    pub fn variables(&self) -> Vec<Var> {
        let mut out = Vec::with_capacity(self.var_count());
        for g in 0..self.groups {
            for i in 0..self.tracks {
                for t in 1..=self.horizon {
                    out.push(Var::X { g, i, t });
                }
            }
        }
        for g in 0..self.groups {
            for i in 0..self.tracks {
                for j in 0..self.tracks {
                    for t in 1..=self.horizon {
                        out.push(Var::Y { g, i, j, t });
                    }
                }
            }
        }
        for i in 0..self.tracks {
            for j in 0..self.tracks {
                for t in 1..=self.horizon {
                    out.push(Var::V { i, j, t });
                }
            }
        }
        for t in 1..=self.horizon {
            out.push(Var::W { t });
        }
        for t in 1..=self.horizon {
            out.push(Var::U { t });
        }
        for i in 0..self.tracks {
            for t in 1..=self.horizon {
                out.push(Var::N { i, t });
            }
        }
        for i in 0..self.tracks {
            for t in 1..=self.horizon {
                out.push(Var::NPlus { i, t });
            }
        }
        for i in 0..self.tracks {
            for t in 1..=self.horizon {
                out.push(Var::NMinus { i, t });
            }
        }
        for g in 0..self.groups {
            for t in 1..=self.horizon {
                out.push(Var::DPlus { g, t });
            }
        }
        for g in 0..self.groups {
            for t in 1..=self.horizon {
                out.push(Var::DMinus { g, t });
            }
        }
        for g in 0..self.groups {
            for t in 1..=self.horizon {
                out.push(Var::P { g, t });
            }
        }
        out
    }

    /// Whether an index combination addresses a real variable (filters the
    /// unused `y`/`v` diagonals).
    pub fn is_valid(&self, var: Var) -> bool {
        match var {
            Var::Y { i, j, .. } | Var::V { i, j, .. } => i != j,
            _ => true,
        }
    }

    /// Streams every constraint row of the formulation in a fixed order.
    pub fn for_each_row(&self, f: &mut dyn FnMut(Row)) {
        let (g_n, k, t_n) = (self.groups, self.tracks, self.horizon);
        let pairs = || {
            (0..k).flat_map(move |i| (0..k).filter_map(move |j| (i != j).then_some((i, j))))
        };

        // (2) each group occupies exactly one track per period.
        for g in 0..g_n {
            for t in 1..=t_n {
                let terms = (0..k).map(|i| (Var::X { g, i, t }, 1.0)).collect();
                f(Row {
                    name: row_name(2, &[g, t]),
                    family: 2,
                    sense: Sense::Eq,
                    rhs: 1.0,
                    terms,
                });
            }
        }
        // (3) track length restrictions.
        for i in 0..k {
            for t in 1..=t_n {
                let terms = (0..g_n)
                    .map(|g| (Var::X { g, i, t }, self.group_len[g]))
                    .collect();
                f(Row {
                    name: row_name(3, &[i, t]),
                    family: 3,
                    sense: Sense::Le,
                    rhs: self.capacity[i],
                    terms,
                });
            }
        }
        // (4) at most one served pair per period.
        for t in 1..=t_n {
            let terms = pairs().map(|(i, j)| (Var::V { i, j, t }, 1.0)).collect();
            f(Row {
                name: row_name(4, &[t]),
                family: 4,
                sense: Sense::Le,
                rhs: 1.0,
                terms,
            });
        }
        // (5) a group moves only along the served pair; (6) and only off the
        // track it occupied.
        for g in 0..g_n {
            for (i, j) in pairs() {
                for t in 1..=t_n {
                    f(Row {
                        name: row_name(5, &[g, i, j, t]),
                        family: 5,
                        sense: Sense::Le,
                        rhs: 0.0,
                        terms: vec![(Var::Y { g, i, j, t }, 1.0), (Var::V { i, j, t }, -1.0)],
                    });
                    let mut rhs = 0.0;
                    let mut terms = vec![(Var::Y { g, i, j, t }, 1.0)];
                    if t == 1 {
                        rhs += bool_val(self.x0[g][i]);
                    } else {
                        terms.push((Var::X { g, i, t: t - 1 }, -1.0));
                    }
                    f(Row {
                        name: row_name(6, &[g, i, j, t]),
                        family: 6,
                        sense: Sense::Le,
                        rhs,
                        terms,
                    });
                }
            }
        }
        // (7)-(10) group-count balance.
        for i in 0..k {
            for t in 1..=t_n {
                let mut rhs = 0.0;
                let mut terms = vec![
                    (Var::N { i, t }, 1.0),
                    (Var::NMinus { i, t }, 1.0),
                    (Var::NPlus { i, t }, -1.0),
                ];
                if t == 1 {
                    rhs += self.n0[i];
                } else {
                    terms.push((Var::N { i, t: t - 1 }, -1.0));
                }
                f(Row {
                    name: row_name(7, &[i, t]),
                    family: 7,
                    sense: Sense::Eq,
                    rhs,
                    terms,
                });
                let mut terms = vec![(Var::NMinus { i, t }, 1.0)];
                for g in 0..g_n {
                    for j in 0..k {
                        if j != i {
                            terms.push((Var::Y { g, i, j, t }, -1.0));
                        }
                    }
                }
                f(Row {
                    name: row_name(8, &[i, t]),
                    family: 8,
                    sense: Sense::Eq,
                    rhs: 0.0,
                    terms,
                });
                let mut terms = vec![(Var::NPlus { i, t }, 1.0)];
                for g in 0..g_n {
                    for j in 0..k {
                        if j != i {
                            terms.push((Var::Y { g, i: j, j: i, t }, -1.0));
                        }
                    }
                }
                f(Row {
                    name: row_name(9, &[i, t]),
                    family: 9,
                    sense: Sense::Eq,
                    rhs: 0.0,
                    terms,
                });
            }
        }
        for t in 1..=t_n {
            let mut terms = Vec::with_capacity(2 * k);
            for i in 0..k {
                terms.push((Var::NPlus { i, t }, 1.0));
                terms.push((Var::NMinus { i, t }, -1.0));
            }
            f(Row {
                name: row_name(10, &[t]),
                family: 10,
                sense: Sense::Eq,
                rhs: 0.0,
                terms,
            });
        }
        // (11)-(12) positions only change for moved groups.
        for g in 0..g_n {
            for t in 1..=t_n {
                for (family, var) in [(11u8, Var::DPlus { g, t }), (12, Var::DMinus { g, t })] {
                    let mut terms = vec![(var, 1.0)];
                    for (i, j) in pairs() {
                        terms.push((Var::Y { g, i, j, t }, -(g_n as f64)));
                    }
                    f(Row {
                        name: row_name(family, &[g, t]),
                        family,
                        sense: Sense::Le,
                        rhs: 0.0,
                        terms,
                    });
                }
            }
        }
        // (13)-(14) moved groups change position by N_j - N_i + N_i^-.
        for g in 0..g_n {
            for t in 1..=t_n {
                for (i, j) in pairs() {
                    for (family, sense, m1_sign) in
                        [(13u8, Sense::Ge, -1.0), (14, Sense::Le, 1.0)]
                    {
                        let mut rhs = self.m1 * m1_sign;
                        let mut terms = vec![
                            (Var::DPlus { g, t }, 1.0),
                            (Var::DMinus { g, t }, -1.0),
                            (Var::NMinus { i, t }, -1.0),
                            (Var::Y { g, i, j, t }, self.m1 * m1_sign),
                        ];
                        if t == 1 {
                            rhs += self.n0[j] - self.n0[i];
                        } else {
                            terms.push((Var::N { i: j, t: t - 1 }, -1.0));
                            terms.push((Var::N { i, t: t - 1 }, 1.0));
                        }
                        f(Row {
                            name: row_name(family, &[g, i, j, t]),
                            family,
                            sense,
                            rhs,
                            terms,
                        });
                    }
                }
            }
        }
        // (15) position bookkeeping.
        for g in 0..g_n {
            for t in 1..=t_n {
                let mut rhs = 0.0;
                let mut terms = vec![
                    (Var::P { g, t }, 1.0),
                    (Var::DPlus { g, t }, -1.0),
                    (Var::DMinus { g, t }, 1.0),
                ];
                if t == 1 {
                    rhs += self.p0[g];
                } else {
                    terms.push((Var::P { g, t: t - 1 }, -1.0));
                }
                f(Row {
                    name: row_name(15, &[g, t]),
                    family: 15,
                    sense: Sense::Eq,
                    rhs,
                    terms,
                });
            }
        }
        // (16)-(17) exactly the switch-end groups ride along.
        for g in 0..g_n {
            for (i, j) in pairs() {
                for t in 1..=t_n {
                    // (16): G y >= P_{t-1} - (N_{i,t-1} - N^-_{it}) - M2 (2 - x - v)
                    let mut rhs = -2.0 * self.m2;
                    let mut terms = vec![
                        (Var::Y { g, i, j, t }, g_n as f64),
                        (Var::NMinus { i, t }, -1.0),
                        (Var::V { i, j, t }, -self.m2),
                    ];
                    if t == 1 {
                        rhs += self.p0[g] - self.n0[i] + self.m2 * bool_val(self.x0[g][i]);
                    } else {
                        terms.push((Var::P { g, t: t - 1 }, -1.0));
                        terms.push((Var::N { i, t: t - 1 }, 1.0));
                        terms.push((Var::X { g, i, t: t - 1 }, -self.m2));
                    }
                    f(Row {
                        name: row_name(16, &[g, i, j, t]),
                        family: 16,
                        sense: Sense::Ge,
                        rhs,
                        terms,
                    });
                    // (17): G (1 - y) >= N_{i,t-1} - N^-_{it} - P_{t-1} + 1 - M2 (2 - x - v)
                    let mut rhs = 1.0 - 2.0 * self.m2 - g_n as f64;
                    let mut terms = vec![
                        (Var::Y { g, i, j, t }, -(g_n as f64)),
                        (Var::NMinus { i, t }, 1.0),
                        (Var::V { i, j, t }, -self.m2),
                    ];
                    if t == 1 {
                        rhs += self.n0[i] - self.p0[g] + self.m2 * bool_val(self.x0[g][i]);
                    } else {
                        terms.push((Var::N { i, t: t - 1 }, -1.0));
                        terms.push((Var::P { g, t: t - 1 }, 1.0));
                        terms.push((Var::X { g, i, t: t - 1 }, -self.m2));
                    }
                    f(Row {
                        name: row_name(17, &[g, i, j, t]),
                        family: 17,
                        sense: Sense::Ge,
                        rhs,
                        terms,
                    });
                }
            }
        }
        // (18)-(21) track-assignment transitions.
        for g in 0..g_n {
            for i in 0..k {
                for t in 1..=t_n {
                    let x_prev: Option<Var> = (t > 1).then(|| Var::X { g, i, t: t - 1 });
                    let x0v = bool_val(self.x0[g][i]);
                    let incoming: Vec<Var> = (0..k)
                        .filter(|&j| j != i)
                        .map(|j| Var::Y { g, i: j, j: i, t })
                        .collect();
                    let outgoing: Vec<Var> = (0..k)
                        .filter(|&j| j != i)
                        .map(|j| Var::Y { g, i, j, t })
                        .collect();

                    let mut terms = vec![(Var::X { g, i, t }, 1.0)];
                    let mut rhs = 0.0;
                    match x_prev {
                        Some(v) => terms.push((v, -1.0)),
                        None => rhs += x0v,
                    }
                    terms.extend(incoming.iter().map(|&v| (v, -1.0)));
                    f(Row {
                        name: row_name(18, &[g, i, t]),
                        family: 18,
                        sense: Sense::Le,
                        rhs,
                        terms,
                    });

                    let mut terms = vec![(Var::X { g, i, t }, 1.0)];
                    let mut rhs = -1.0;
                    match x_prev {
                        Some(v) => terms.push((v, -1.0)),
                        None => rhs += x0v,
                    }
                    terms.extend(incoming.iter().map(|&v| (v, -2.0)));
                    f(Row {
                        name: row_name(19, &[g, i, t]),
                        family: 19,
                        sense: Sense::Ge,
                        rhs,
                        terms,
                    });

                    let mut terms = vec![(Var::X { g, i, t }, 1.0)];
                    let mut rhs = 0.0;
                    match x_prev {
                        Some(v) => terms.push((v, -1.0)),
                        None => rhs += x0v,
                    }
                    terms.extend(outgoing.iter().map(|&v| (v, 1.0)));
                    terms.extend(incoming.iter().map(|&v| (v, -1.0)));
                    f(Row {
                        name: row_name(20, &[g, i, t]),
                        family: 20,
                        sense: Sense::Le,
                        rhs,
                        terms,
                    });

                    let mut terms = vec![(Var::X { g, i, t }, 1.0)];
                    let mut rhs = 0.0;
                    match x_prev {
                        Some(v) => terms.push((v, -1.0)),
                        None => rhs += x0v,
                    }
                    terms.extend(outgoing.iter().map(|&v| (v, 1.0)));
                    f(Row {
                        name: row_name(21, &[g, i, t]),
                        family: 21,
                        sense: Sense::Ge,
                        rhs,
                        terms,
                    });
                }
            }
        }
        // (22)-(23) w_t certifies every group is home.
        for t in 1..=t_n {
            for g in 0..g_n {
                match self.dest[g] {
                    Some(d) => f(Row {
                        name: row_name(22, &[g, t]),
                        family: 22,
                        sense: Sense::Le,
                        rhs: 0.0,
                        terms: vec![(Var::W { t }, 1.0), (Var::X { g, i: d, t }, -1.0)],
                    }),
                    None => {
                        let mut terms = vec![(Var::W { t }, 1.0)];
                        terms.extend(
                            self.classification
                                .iter()
                                .map(|&i| (Var::X { g, i, t }, -1.0)),
                        );
                        f(Row {
                            name: row_name(23, &[g, t]),
                            family: 23,
                            sense: Sense::Le,
                            rhs: 0.0,
                            terms,
                        });
                    }
                }
            }
        }
        // (24)-(25) exactly one first all-home period; w_0 = 0.
        for t in 1..=t_n {
            let mut terms = vec![(Var::U { t }, 1.0), (Var::W { t }, -1.0)];
            if t > 1 {
                terms.push((Var::W { t: t - 1 }, 1.0));
            }
            f(Row {
                name: row_name(24, &[t]),
                family: 24,
                sense: Sense::Le,
                rhs: 0.0,
                terms,
            });
        }
        f(Row {
            name: row_name(25, &[0]),
            family: 25,
            sense: Sense::Eq,
            rhs: 1.0,
            terms: (1..=t_n).map(|t| (Var::U { t }, 1.0)).collect(),
        });
        // (26) moves happen in a prefix of the horizon.
        for t in 1..t_n {
            let mut terms = Vec::new();
            for (i, j) in pairs() {
                terms.push((Var::V { i, j, t }, 1.0));
                terms.push((Var::V { i, j, t: t + 1 }, -1.0));
            }
            f(Row {
                name: row_name(26, &[t]),
                family: 26,
                sense: Sense::Ge,
                rhs: 0.0,
                terms,
            });
        }
    }
}

fn bool_val(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn b36(n: usize) -> char {
    char::from_digit(n as u32, 36)
        .expect("index fits base 36")
        .to_ascii_uppercase()
}

/// Variable name, at most 8 characters: family letter plus base-36 indices
/// (two digits for the period).
pub fn var_name(var: Var) -> String {
    let t2 = |t: usize| format!("{}{}", b36(t / 36), b36(t % 36));
    match var {
        Var::X { g, i, t } => format!("X{}{}{}", b36(g), b36(i), t2(t)),
        Var::Y { g, i, j, t } => format!("Y{}{}{}{}", b36(g), b36(i), b36(j), t2(t)),
        Var::V { i, j, t } => format!("V{}{}{}", b36(i), b36(j), t2(t)),
        Var::W { t } => format!("W{}", t2(t)),
        Var::U { t } => format!("U{}", t2(t)),
        Var::N { i, t } => format!("N{}{}", b36(i), t2(t)),
        Var::NPlus { i, t } => format!("A{}{}", b36(i), t2(t)),
        Var::NMinus { i, t } => format!("R{}{}", b36(i), t2(t)),
        Var::DPlus { g, t } => format!("D{}{}", b36(g), t2(t)),
        Var::DMinus { g, t } => format!("E{}{}", b36(g), t2(t)),
        Var::P { g, t } => format!("P{}{}", b36(g), t2(t)),
    }
}

fn row_name(family: u8, indices: &[usize]) -> String {
    let mut out = String::from("C");
    out.push(b36(family as usize));
    for (pos, &ix) in indices.iter().enumerate() {
        if pos == indices.len() - 1 {
            // the trailing index is the period, two digits
            out.push(b36(ix / 36));
            out.push(b36(ix % 36));
        } else {
            out.push(b36(ix));
        }
    }
    out
}

/// A full variable valuation.
#[derive(Debug, Clone)]
pub struct MipAssignment {
    values: Vec<f64>,
    pub objective: f64,
}

impl MipAssignment {
    pub fn zeroed(model: &MipModel) -> Self {
        MipAssignment {
            values: vec![0.0; model.var_count()],
            objective: 0.0,
        }
    }

    pub fn get(&self, model: &MipModel, var: Var) -> f64 {
        self.values[model.index(var)]
    }

    pub fn set(&mut self, model: &MipModel, var: Var, value: f64) {
        self.values[model.index(var)] = value;
    }
}

/// Simulates `plan` period by period and writes the corresponding variable
/// values. Periods after the last move carry state forward with no moves.
pub fn plan_to_assignment(
    instance: &YardInstance,
    plan: &Plan,
    horizon: usize,
) -> Result<(MipModel, MipAssignment), MipError> {
    let model = build_mip(instance, horizon)?;
    if plan.moves.len() > horizon {
        return Err(MipError::PlanTooLong {
            moves: plan.moves.len(),
            horizon,
        });
    }
    let mut asg = MipAssignment::zeroed(&model);
    let k = instance.num_tracks();

    // Track the evolving state; capacity is not enforced here, the checker
    // reports any length violation through family (3).
    let mut states: Vec<YardState> = Vec::with_capacity(horizon + 1);
    let mut cur = instance.initial.clone();
    cur.pad_tracks(k);
    states.push(cur.clone());
    for t in 1..=horizon {
        if let Some(mv) = plan.moves.get(t - 1) {
            let prev_counts: Vec<f64> = (0..k).map(|i| cur.track(i).len() as f64).collect();
            let moved: Vec<String> = {
                let seq = cur.track(mv.src);
                seq[seq.len() - mv.count..].to_vec()
            };
            asg.set(
                &model,
                Var::V {
                    i: mv.src,
                    j: mv.dst,
                    t,
                },
                1.0,
            );
            asg.objective += instance.move_cost(mv.src, mv.dst);
            let delta = prev_counts[mv.dst] - prev_counts[mv.src] + mv.count as f64;
            for id in &moved {
                let g = instance.groups.iter().position(|cg| cg.id == *id).unwrap();
                asg.set(
                    &model,
                    Var::Y {
                        g,
                        i: mv.src,
                        j: mv.dst,
                        t,
                    },
                    1.0,
                );
                asg.set(&model, Var::DPlus { g, t }, delta.max(0.0));
                asg.set(&model, Var::DMinus { g, t }, (-delta).max(0.0));
            }
            asg.set(
                &model,
                Var::NMinus { i: mv.src, t },
                mv.count as f64,
            );
            asg.set(&model, Var::NPlus { i: mv.dst, t }, mv.count as f64);
            cur = crate::yard::apply_move_unchecked_capacity(&cur, *mv, instance)
                .expect("plan moves are structurally legal");
        }
        for i in 0..k {
            asg.set(&model, Var::N { i, t }, cur.track(i).len() as f64);
            for (pos, id) in cur.track(i).iter().enumerate() {
                let g = instance.groups.iter().position(|cg| cg.id == *id).unwrap();
                asg.set(&model, Var::X { g, i, t }, 1.0);
                asg.set(&model, Var::P { g, t }, (pos + 1) as f64);
            }
        }
        states.push(cur.clone());
    }

    // w is the largest monotone indicator compatible with the states; u
    // marks its single 0 -> 1 step.
    let mut all_home_from = horizon + 1;
    for t in (1..=horizon).rev() {
        if crate::yard::is_final(&states[t], instance) {
            all_home_from = t;
        } else {
            break;
        }
    }
    if all_home_from <= horizon {
        for t in all_home_from..=horizon {
            asg.set(&model, Var::W { t }, 1.0);
        }
        asg.set(&model, Var::U { t: all_home_from }, 1.0);
    }
    Ok((model, asg))
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub family: u8,
    pub row: String,
    pub lhs: f64,
    pub rhs: f64,
    pub sense: Sense,
}

#[derive(Debug, Clone)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub objective: f64,
    pub rows_checked: usize,
}

const FEAS_EPS: f64 = 1e-6;

/// Evaluates every constraint row plus the integrality and binary domains.
pub fn check_feasibility(model: &MipModel, assignment: &MipAssignment) -> FeasibilityReport {
    let mut violations = Vec::new();
    let mut rows = 0usize;
    model.for_each_row(&mut |row| {
        rows += 1;
        let lhs: f64 = row
            .terms
            .iter()
            .map(|&(var, coef)| coef * assignment.get(model, var))
            .sum();
        let ok = match row.sense {
            Sense::Le => lhs <= row.rhs + FEAS_EPS,
            Sense::Ge => lhs >= row.rhs - FEAS_EPS,
            Sense::Eq => (lhs - row.rhs).abs() <= FEAS_EPS,
        };
        if !ok {
            violations.push(Violation {
                family: row.family,
                row: row.name,
                lhs,
                rhs: row.rhs,
                sense: row.sense,
            });
        }
    });
    // (27)-(28) domains.
    for var in model.variables() {
        if !model.is_valid(var) {
            continue;
        }
        rows += 1;
        let v = assignment.get(model, var);
        let integral = (v - v.round()).abs() <= FEAS_EPS;
        let ok = if model.is_binary(var) {
            integral && (-FEAS_EPS..=1.0 + FEAS_EPS).contains(&v)
        } else {
            integral && v >= -FEAS_EPS
        };
        if !ok {
            violations.push(Violation {
                family: if model.is_binary(var) { 27 } else { 28 },
                row: var_name(var),
                lhs: v,
                rhs: 0.0,
                sense: Sense::Ge,
            });
        }
    }
    let objective = model
        .objective()
        .iter()
        .map(|&(var, coef)| coef * assignment.get(model, var))
        .sum();
    FeasibilityReport {
        feasible: violations.is_empty(),
        violations,
        objective,
        rows_checked: rows,
    }
}

/// Fixed-format MPS rendering with deterministic row and column order. The
/// objective row is named `SHUNTCOST`; every variable is integer (binaries
/// via `BV`, counters and positions with explicit integer upper bounds).
pub fn export_mps(model: &MipModel) -> String {
    let mut rows_section = String::new();
    let mut row_order: Vec<(String, Sense)> = Vec::new();
    model.for_each_row(&mut |row| {
        row_order.push((row.name.clone(), row.sense));
    });

    let mut out = String::new();
    out.push_str("NAME          SHUNTYARD\n");
    out.push_str("ROWS\n");
    out.push_str(" N  SHUNTCOST\n");
    for (name, sense) in &row_order {
        let tag = match sense {
            Sense::Le => 'L',
            Sense::Ge => 'G',
            Sense::Eq => 'E',
        };
        let _ = writeln!(rows_section, " {tag}  {name}");
    }
    out.push_str(&rows_section);

    // Column-major nonzeros: objective first, then per-row coefficients.
    let mut columns: Vec<Vec<(String, f64)>> = vec![Vec::new(); model.var_count()];
    for (var, coef) in model.objective() {
        if coef != 0.0 {
            columns[model.index(var)].push(("SHUNTCOST".to_string(), coef));
        }
    }
    model.for_each_row(&mut |row| {
        for &(var, coef) in &row.terms {
            if coef != 0.0 {
                columns[model.index(var)].push((row.name.clone(), coef));
            }
        }
    });

    out.push_str("COLUMNS\n");
    out.push_str("    MARKER                 'MARKER'                 'INTORG'\n");
    for var in model.variables() {
        if !model.is_valid(var) {
            continue;
        }
        let entries = &columns[model.index(var)];
        let name = var_name(var);
        if entries.is_empty() {
            // Declare the column anyway so the variable exists in the file.
            let _ = writeln!(out, "    {:<8}  {:<8}  {}", name, "SHUNTCOST", fmt_num(0.0));
            continue;
        }
        for (row, coef) in entries {
            let _ = writeln!(out, "    {:<8}  {:<8}  {}", name, row, fmt_num(*coef));
        }
    }
    out.push_str("    MARKER                 'MARKER'                 'INTEND'\n");

    out.push_str("RHS\n");
    model.for_each_row(&mut |row| {
        if row.rhs != 0.0 {
            let _ = writeln!(out, "    RHS       {:<8}  {}", row.name, fmt_num(row.rhs));
        }
    });

    out.push_str("BOUNDS\n");
    let int_upper = model.groups as f64;
    for var in model.variables() {
        if !model.is_valid(var) {
            continue;
        }
        let name = var_name(var);
        if model.is_binary(var) {
            let _ = writeln!(out, " BV BND       {name}");
        } else {
            let _ = writeln!(out, " UI BND       {:<8}  {}", name, fmt_num(int_upper));
        }
    }
    out.push_str("ENDATA\n");
    out
}

fn fmt_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e12 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Convenience: horizon for a plan check, `max(plan length, heuristic T)`.
pub fn horizon_for_plan(instance: &YardInstance, plan: &Plan, delta: usize) -> usize {
    let auto = crate::horizon::compute_horizon(instance, delta)
        .map(|h| h.t)
        .unwrap_or(0);
    plan.moves.len().max(auto).max(1)
}
