//! Commutators, numerical kernels, eigenspaces and restrictions.

use super::decomp::{right_svd, RightSvd};
use super::mat::{common_square_size, Mat, C64};
use super::schur::schur;
use super::subspace::Subspace;
use super::tol::Tolerances;
use crate::error::{Error, Result};

/// `[a, b] = ab − ba`.
pub fn commutator(a: &Mat, b: &Mat) -> Result<Mat> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::Input(format!(
            "commutator needs equal square shapes, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(&a.matmul(b) - &b.matmul(a))
}

/// Singular-value cutoff used by [`kernel`] for a matrix with largest
/// singular value `sigma_max`.
pub fn rank_cutoff(rows: usize, cols: usize, sigma_max: f64, tol: &Tolerances) -> f64 {
    tol.rank_rel * rows.max(cols) as f64 * sigma_max
}

/// Right singular vectors of `m` with `σ ≤ cutoff`, most-null first.
pub(crate) fn kernel_with_cutoff(m: &Mat, cutoff: f64) -> Result<(Subspace, Vec<f64>)> {
    null_space(right_svd(m)?, m.cols(), cutoff)
}

/// [`kernel`] with the cutoff raised to at least `floor`, for matrices whose
/// entries carry rounding error on an absolute scale known to the caller.
pub(crate) fn kernel_with_floor(m: &Mat, tol: &Tolerances, floor: f64) -> Result<Subspace> {
    let svd = right_svd(m)?;
    let cutoff = rank_cutoff(m.rows(), m.cols(), svd.singular_values[0], tol).max(floor);
    Ok(null_space(svd, m.cols(), cutoff)?.0)
}

fn null_space(svd: RightSvd, n: usize, cutoff: f64) -> Result<(Subspace, Vec<f64>)> {
    let mut idx: Vec<usize> = (0..n)
        .filter(|&j| svd.singular_values[j] <= cutoff)
        .collect();
    idx.reverse();
    let cols: Vec<Vec<C64>> = idx.iter().map(|&j| svd.v.col(j)).collect();
    let mut space = Subspace::from_columns(n, &cols)?;
    if space.dim() != idx.len() {
        // V is unitary, so Gram-Schmidt can only lose a column to a bug
        return Err(Error::numerical("kernel", "right singular vectors lost orthogonality"));
    }
    if space.dim() == n {
        space = Subspace::full(n);
    }
    Ok((space, svd.singular_values))
}

/// Orthonormal basis of the numerical null space of `m`.
pub fn kernel(m: &Mat, tol: &Tolerances) -> Result<Subspace> {
    if m.cols() == 0 {
        return Err(Error::Input("kernel of a matrix without columns".into()));
    }
    let svd = right_svd(m)?;
    let cutoff = rank_cutoff(m.rows(), m.cols(), svd.singular_values[0], tol);
    Ok(kernel_with_cutoff(m, cutoff)?.0)
}

/// Kernel of the vertical stack of `ms`, i.e. the intersection of their kernels.
/// An empty list gives all of ℂⁿ.
pub fn stacked_kernel(ms: &[Mat], n: usize, tol: &Tolerances) -> Result<Subspace> {
    if ms.is_empty() {
        return Ok(Subspace::full(n));
    }
    let size = common_square_size(ms)?;
    if size != n {
        return Err(Error::Input(format!(
            "stacked_kernel: matrices are {size}x{size}, expected {n}x{n}"
        )));
    }
    kernel(&Mat::vstack(ms), tol)
}

/// One eigenvalue cluster and its geometric eigenspace.
#[derive(Debug, Clone)]
pub struct Eigenspace {
    /// Cluster mean.
    pub eigenvalue: C64,
    /// Algebraic multiplicity: number of Schur diagonal entries in the cluster.
    pub multiplicity: usize,
    pub space: Subspace,
}

/// Eigenspaces ordered by ascending dimension, ties by `(re, im)` of the eigenvalue.
#[derive(Debug, Clone)]
pub struct EigenspaceList {
    pub items: Vec<Eigenspace>,
}

impl EigenspaceList {
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.items.iter().map(|e| e.eigenvalue).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.items.iter().map(|e| e.space.dim()).sum()
    }

    pub fn smallest(&self) -> Option<&Eigenspace> {
        self.items.first()
    }
}

/// Single-linkage clustering of `values` at radius `radius`; each cluster is
/// returned as indices into `values`, in order of first member.
pub(crate) fn cluster(values: &[C64], radius: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        let mut j = i;
        while label[j] != r {
            let next = label[j];
            label[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radius {
                let (ri, rj) = (find(&mut label, i), find(&mut label, j));
                if ri != rj {
                    label[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_to_group: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut label, i);
        match root_to_group[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_to_group[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Geometric eigenspaces of `a` from its Schur form.
///
/// Schur eigenvalues are clustered at radius `eig_cluster_rel · ‖a‖_F`; for
/// each cluster mean `λ̄` the eigenspace is spanned by right singular vectors of
/// `a − λ̄I` with `σ ≤ max(rank cutoff, eig_cluster_rel · ‖a‖_F)`. Its
/// dimension is clamped to `[1, multiplicity]`, since `λ̄` is an eigenvalue by
/// construction.
pub fn schur_eigenspaces(a: &Mat, tol: &Tolerances) -> Result<EigenspaceList> {
    let n = common_square_size(std::slice::from_ref(a))?;
    let norm = a.fro_norm();
    let eigs = schur(a)?.eigenvalues();
    let radius = tol.eig_cluster_rel * norm;
    let mut items = Vec::new();
    for group in cluster(&eigs, radius) {
        let lambda = group.iter().map(|&i| eigs[i]).sum::<C64>() / group.len() as f64;
        let shifted = a.shift(lambda);
        let svd = right_svd(&shifted)?;
        let cutoff = rank_cutoff(n, n, svd.singular_values[0], tol).max(radius);
        let count = svd
            .singular_values
            .iter()
            .filter(|&&s| s <= cutoff)
            .count()
            .clamp(1, group.len());
        let cols: Vec<Vec<C64>> = (n - count..n).rev().map(|j| svd.v.col(j)).collect();
        let space = Subspace::from_columns(n, &cols)?;
        items.push(Eigenspace {
            eigenvalue: lambda,
            multiplicity: group.len(),
            space,
        });
    }
    items.sort_by(|x, y| {
        x.space
            .dim()
            .cmp(&y.space.dim())
            .then(x.eigenvalue.re.total_cmp(&y.eigenvalue.re))
            .then(x.eigenvalue.im.total_cmp(&y.eigenvalue.im))
    });
    Ok(EigenspaceList { items })
}

/// `‖(I − BB^*) a B‖_F`, the amount by which `a` maps `span(B)` outside itself.
pub fn invariance_residual(a: &Mat, s: &Subspace) -> f64 {
    let b = s.basis();
    if b.cols() == 0 {
        return 0.0;
    }
    let ab = a.matmul(b);
    let coeffs = b.adjoint_mul(&ab);
    (&ab - &b.matmul(&coeffs)).fro_norm()
}

/// Matrix of `a|_S` in the orthonormal coordinates of `s`, i.e. `B^* a B`.
pub fn restrict(a: &Mat, s: &Subspace, tol: &Tolerances) -> Result<Mat> {
    if !a.is_square() || a.rows() != s.ambient_dim() {
        return Err(Error::Input(format!(
            "cannot restrict a {}x{} matrix to a subspace of ℂ^{}",
            a.rows(),
            a.cols(),
            s.ambient_dim()
        )));
    }
    let residual = invariance_residual(a, s);
    let bound = tol.residual_rel * a.fro_norm();
    if residual > bound {
        return Err(Error::NonInvariantSubspace { residual, bound });
    }
    let b = s.basis();
    Ok(b.adjoint_mul(&a.matmul(b)))
}

/// `Some(trace(a)/n)` when `a` is within `residual_rel · max(‖a‖_F, 1)` of that
/// multiple of the identity.
pub fn scalar_multiple_of_identity(a: &Mat, tol: &Tolerances) -> Option<C64> {
    let n = a.rows();
    if n == 0 || !a.is_square() {
        return None;
    }
    let lambda = a.trace() / n as f64;
    let off = a.shift(lambda).fro_norm();
    (off <= tol.residual_rel * a.fro_norm().max(1.0)).then_some(lambda)
}
