//! Lie algebra generated by a set of matrices, with an incremental
//! independence tracker.

mod closure;
mod tracker;

pub use closure::{
    generate_lie_algebra, independent_indices, iteration_count, remove_linearly_dependent,
    ClosureStats, LieBasis, Provenance, Strategy,
};
pub use tracker::IndependenceTracker;
