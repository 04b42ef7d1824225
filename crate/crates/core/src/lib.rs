//! Common eigenvectors and simultaneous triangulation of complex matrix families.
//!
//! The entry points are [`common_eigenvector`] (a vector `v` with `Aᵢv = λᵢv`
//! for every matrix, or a certificate that none exists) and
//! [`simultaneous_triangulation`] (a unitary `Q` making every `Q^*AᵢQ` upper
//! triangular). Both rest on the Lie closure in [`lie`] and the dense complex
//! kernels in [`linalg`]. [`oracle`] holds the brute-force reference search
//! and seeded instance generators used by the tests.
//!
//! With the default `parallel` feature, pairwise commutator stacks, the
//! brute-force tuple search and the [`batch`] drivers run on rayon; results
//! are identical to the sequential path.

pub mod batch;
pub mod cli;
pub mod eigvec;
pub mod error;
pub mod exec;
pub mod lie;
pub mod linalg;
pub mod oracle;
pub mod triangulate;

pub use eigvec::{
    closure_and_shemesh, common_eigenvector, common_eigenvector_commuting,
    common_eigenvector_report, shemesh_subspace, shemesh_subspace_with, EigvecReport,
    EigvecResult, SolveOptions, SolvePath,
};
pub use error::{Error, Result};
pub use exec::Parallelism;
pub use lie::{generate_lie_algebra, remove_linearly_dependent, LieBasis, Strategy};
pub use linalg::{Mat, Subspace, Tolerances, C64};
pub use oracle::{brute_force_common_eigenvector, make_instance, InstanceKind, InstanceSpec};
pub use triangulate::{
    is_simultaneously_triangulable, simultaneous_triangulation, triangulate, Triangulation,
    TriangulationResult,
};
