//! Many independent instances at once, fanned out over rayon.

use crate::eigvec::{common_eigenvector_report, EigvecReport, SolveOptions};
use crate::error::Result;
use crate::exec::map_collect;
use crate::linalg::{Mat, Tolerances};
use crate::oracle::brute_force_with;
use crate::triangulate::{triangulate, Triangulation};
use crate::{EigvecResult, Parallelism};

pub fn common_eigenvectors(
    instances: &[Vec<Mat>],
    tol: &Tolerances,
    opts: &SolveOptions,
) -> Vec<Result<EigvecReport>> {
    // each instance runs its inner loops sequentially; the batch is the parallel axis
    let inner = SolveOptions {
        parallelism: Parallelism::Sequential,
        ..*opts
    };
    map_collect(opts.parallelism, instances, |ms| {
        common_eigenvector_report(ms, tol, &inner)
    })
}

pub fn triangulations(
    instances: &[Vec<Mat>],
    tol: &Tolerances,
    opts: &SolveOptions,
) -> Vec<Result<Triangulation>> {
    let inner = SolveOptions {
        parallelism: Parallelism::Sequential,
        ..*opts
    };
    map_collect(opts.parallelism, instances, |ms| triangulate(ms, tol, &inner))
}

pub fn brute_force(
    instances: &[Vec<Mat>],
    tol: &Tolerances,
    mode: Parallelism,
) -> Vec<Result<Vec<EigvecResult>>> {
    map_collect(mode, instances, |ms| {
        brute_force_with(ms, tol, Parallelism::Sequential)
    })
}
