//! Sequencing toolkit for finite groups in additive notation.
//!
//! The crate covers four areas:
//!
//! * [`group`]: cyclic groups, products of cyclics, and Cayley-table groups,
//!   with cyclic-subgroup views, discrete logs, and intersections.
//! * [`seq`] / [`search`] / [`construct`]: t-weak sequencings of multisets
//!   (all partial sums within a sliding window of size `t` distinct),
//!   verified, brute-forced, or built constructively with a randomized
//!   final stage.
//! * [`bounds`] / [`montecarlo`]: an exact rational first-moment bound for
//!   the randomized stage and a Monte Carlo harness validating it. With the
//!   default `parallel` feature the trials run on rayon; results are
//!   byte-identical to the sequential fallback.
//! * [`walk`]: walks whose consecutive differences realize a multiset up to
//!   signs while vertices stay distinct within the window, including the
//!   two-element construction and the gluing of pair walks.

pub mod bounds;
pub mod construct;
pub mod group;
pub mod montecarlo;
pub mod multiset;
pub mod report;
pub mod search;
pub mod seq;
pub mod walk;

pub use bounds::{expectation_bound, min_ell, BoundReport, BoundsError};
pub use construct::{sequence_multiset, SeqError, SeqRoute, SequenceResult};
pub use group::{subgroup_intersection, CyclicView, Element, Group, GroupError};
pub use montecarlo::{
    build_scenario, monte_carlo_expectation, McError, MonteCarloReport, Scenario,
};
pub use multiset::{Multiset, MultisetError, Sequencing};
pub use search::{
    brute_force_sequence, find_zero_sum_free_subset, is_zero_sum_free, SearchError, SearchOutcome,
};
pub use seq::{partial_sums, verify_t_weak, SeqVerdict};
pub use walk::{
    brute_force_realize, realize_multiset, realize_pair, verify_realization, Direction,
    RealVerdict, Realized, RealizeRoute, Walk, WalkError,
};
