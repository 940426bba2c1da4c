//! Rainbow stackings of edge-colorings of complete graphs.
//!
//! Given colorings `χ_1, ..., χ_m` of the edges of `K_n`, a rainbow stacking
//! is a tuple of vertex permutations under which every edge sees `m`
//! distinct colors. The crate searches for and counts stackings, evaluates
//! first- and second-moment quantities exactly or to 128-bit precision,
//! builds the collision graphs behind the second moment, and runs seeded
//! threshold experiments and exhaustive verifications.

pub mod coloring;
pub mod collision;
pub mod error;
pub mod experiments;
pub mod moments;
pub mod output;
pub mod perm;
pub mod real;
pub mod rng;
pub mod stacking;

pub use coloring::{
    cayley_sum_pair, enumerate_matching_partitions, round_robin_coloring, EdgeColoring, MatchingPartition,
};
pub use collision::{
    build_collision_graph, count_proper_colorings, entropy_bound_rhs, m2_closed_form, pair_correlation,
    second_moment_exact, CollisionGraph, Provenance,
};
pub use error::{Error, Result};
pub use moments::{first_moment, first_moment_exact, first_moment_upper_bound, threshold_formulas, Thresholds};
pub use perm::{weight_report, Edge, Perm, PermTuple, WeightReport};
pub use real::BigReal;
pub use stacking::{
    count_rainbow_stackings, find_rainbow_stacking, is_rainbow_stacking, SearchBudget, SearchOutcome, SearchStatus,
    StackingCount, StackingInstance,
};
