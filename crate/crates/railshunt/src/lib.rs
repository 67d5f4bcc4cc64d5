//! Solver toolkit for railcar shunting in flat yards with one-sided tracks.
//!
//! A yard holds car groups on classification tracks; destined groups must be
//! relocated to their departure tracks, at minimum total cost, by a
//! locomotive that always pulls from the switch end of a track and may move
//! several adjacent groups per operation. The crate provides:
//!
//! - [`yard`] — instance and state model plus the semantics of one move;
//! - [`exact`] — an optimal solver over the full state graph, with all
//!   sorted configurations collapsed into a single sink;
//! - [`counting`] — closed-form state-space sizes and reduction ratios;
//! - [`horizon`] — a constructive heuristic whose move count bounds the
//!   planning horizon of the time-indexed model;
//! - [`argdp`] — the adaptive-grouping heuristic: preprocessing, a pruned
//!   graph over merged states, and a shortest path through it;
//! - [`mip`] — the time-indexed integer model: construction, plan-to-
//!   assignment conversion, constraint-by-constraint checking, MPS export;
//! - [`stacksort`] — zero-shuffle sortability analysis: conflict graphs for
//!   single-item and batch-move sorting, the sequence transformation linking
//!   them, and special-cost instances whose optimum certifies sortability;
//! - [`generator`] — seeded random instances and the fixed 14-track layout;
//! - [`bench`] — a harness comparing the exact solver and the heuristic.
//!
//! Each capability has a runnable example under `examples/`; the `railshunt`
//! binary exposes the same operations as subcommands.

pub mod argdp;
pub mod bench;
pub mod counting;
mod dense;
pub mod exact;
pub mod generator;
mod grouping;
pub mod horizon;
pub mod mip;
pub mod stacksort;
pub mod yard;
