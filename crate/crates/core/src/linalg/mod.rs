//! Dense complex linear algebra: the matrix type, factorizations, and the
//! kernel / eigenspace / restriction primitives the solvers are built from.

pub mod decomp;
pub mod mat;
pub mod ops;
pub mod schur;
pub mod subspace;
pub mod tol;

pub use mat::{common_square_size, dot, vec_norm, Mat, C64};
pub use ops::{
    commutator, invariance_residual, kernel, rank_cutoff, restrict, scalar_multiple_of_identity,
    schur_eigenspaces, stacked_kernel, Eigenspace, EigenspaceList,
};
pub use schur::{schur, Schur};
pub use subspace::Subspace;
pub use tol::Tolerances;
