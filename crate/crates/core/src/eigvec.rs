//! Common eigenvectors of a matrix family.
//!
//! For a commuting family the solver walks a chain of nested common invariant
//! subspaces: restrict the next matrix to the current space and move into its
//! smallest eigenspace. For an arbitrary family the input is first closed
//! under commutators; every common eigenvector lies in the intersection `T`
//! of the kernels of all pairwise commutators of that basis, `T` is invariant
//! under the whole algebra, and the restrictions to `T` commute. `T = {0}`
//! certifies that no common eigenvector exists.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_range, Parallelism};
use crate::lie::{generate_lie_algebra, independent_indices, ClosureStats, LieBasis, Strategy};
use crate::linalg::mat::{common_square_size, vec_norm, Mat, C64, ZERO};
use crate::linalg::ops::kernel_with_floor;
use crate::linalg::{
    commutator, rank_cutoff, restrict, scalar_multiple_of_identity, schur_eigenspaces,
    Subspace, Tolerances,
};

/// A verified common eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigvecResult {
    vector: Vec<C64>,
    eigenvalues: Vec<C64>,
    residuals: Vec<f64>,
}

impl EigvecResult {
    /// Normalize `v`, fix its phase (largest component real and positive),
    /// read eigenvalues off as Rayleigh quotients `v^* Aᵢ v` and check every
    /// residual `‖Aᵢv − λᵢv‖ / max(‖Aᵢ‖_F, 1)` against `residual_rel`.
    pub fn verify(ms: &[Mat], v: &[C64], tol: &Tolerances) -> Result<Self> {
        let r = Self::measure(ms, v)?;
        if r.max_residual() > tol.residual_rel {
            return Err(Error::NumericalFailure {
                stage: "residual verification",
                detail: format!(
                    "largest eigen-residual {:.3e} exceeds {:.3e}",
                    r.max_residual(),
                    tol.residual_rel
                ),
                residuals: r.residuals,
            });
        }
        Ok(r)
    }

    /// Same as [`verify`](Self::verify) without the residual bound.
    pub fn measure(ms: &[Mat], v: &[C64]) -> Result<Self> {
        let n = common_square_size(ms)?;
        if v.len() != n {
            return Err(Error::Input(format!(
                "vector of length {} for {n}x{n} matrices",
                v.len()
            )));
        }
        let norm = vec_norm(v);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::numerical("residual verification", "candidate vector is zero"));
        }
        let (lead, _) = v
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, z)| if z.norm() > best.1 { (i, z.norm()) } else { best });
        let phase = v[lead] / v[lead].norm();
        let vector: Vec<C64> = v.iter().map(|z| z / (phase * norm)).collect();

        let mut eigenvalues = Vec::with_capacity(ms.len());
        let mut residuals = Vec::with_capacity(ms.len());
        for a in ms {
            let av = a.mul_vec(&vector);
            let lambda: C64 = vector.iter().zip(&av).map(|(x, y)| x.conj() * y).sum();
            let r: Vec<C64> = av.iter().zip(&vector).map(|(y, x)| y - lambda * x).collect();
            eigenvalues.push(lambda);
            residuals.push(vec_norm(&r) / a.fro_norm().max(1.0));
        }
        Ok(EigvecResult {
            vector,
            eigenvalues,
            residuals,
        })
    }

    pub fn vector(&self) -> &[C64] {
        &self.vector
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn check_commuting(ms: &[Mat], tol: &Tolerances) -> Result<()> {
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            let c = commutator(&ms[i], &ms[j])?.fro_norm();
            let bound = tol.residual_rel * ms[i].fro_norm() * ms[j].fro_norm();
            if c > bound {
                return Err(Error::Precondition(format!(
                    "matrices {i} and {j} do not commute: ‖[A,B]‖_F = {c:.3e} > {bound:.3e}"
                )));
            }
        }
    }
    Ok(())
}

/// Common eigenvector of a commuting family.
///
/// Starting from ℂⁿ, each matrix in turn is restricted to the current common
/// invariant subspace; unless the restriction is a multiple of the identity,
/// the space shrinks to the lift of the restriction's smallest eigenspace.
/// The walk stops once the space is a line.
pub fn common_eigenvector_commuting(ms: &[Mat], tol: &Tolerances) -> Result<EigvecResult> {
    let n = common_square_size(ms)?;
    check_commuting(ms, tol)?;
    let mut space = Subspace::full(n);
    for a in ms {
        if space.dim() == 1 {
            break;
        }
        let local = restrict(a, &space, tol)?;
        if scalar_multiple_of_identity(&local, tol).is_some() {
            continue;
        }
        let eigenspaces = schur_eigenspaces(&local, tol)?;
        let smallest = eigenspaces
            .smallest()
            .ok_or_else(|| Error::numerical("commuting case", "restriction has no eigenspace"))?;
        space = space.lift(&smallest.space)?;
    }
    EigvecResult::verify(ms, &space.basis().col(0), tol)
}

fn pairwise_commutators(ms: &[Mat], mode: Parallelism) -> Vec<Mat> {
    let d = ms.len();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
    map_range(mode, pairs.len(), |p| {
        let (i, j) = pairs[p];
        &ms[i].matmul(&ms[j]) - &ms[j].matmul(&ms[i])
    })
}

/// `T = ⋂_{i<j} ker [Aᵢ, Aⱼ]`, computed as the kernel of the stacked commutators.
pub fn shemesh_subspace(ms: &[Mat], tol: &Tolerances) -> Result<Subspace> {
    shemesh_subspace_with(ms, tol, Parallelism::default())
}

/// [`shemesh_subspace`] with explicit control over the commutator loop.
pub fn shemesh_subspace_with(ms: &[Mat], tol: &Tolerances, mode: Parallelism) -> Result<Subspace> {
    let n = common_square_size(ms)?;
    let comms = pairwise_commutators(ms, mode);
    if comms.iter().all(|c| c.max_abs() == 0.0) {
        return Ok(Subspace::full(n));
    }
    // a commutator that vanishes in exact arithmetic still comes out at about
    // ε·n·‖Aᵢ‖‖Aⱼ‖; nothing below that scale is evidence of non-commutation
    let norms: Vec<f64> = ms.iter().map(Mat::fro_norm).collect();
    let mut scale: f64 = 0.0;
    for i in 0..norms.len() {
        for j in i + 1..norms.len() {
            scale = scale.max(norms[i] * norms[j]);
        }
    }
    kernel_with_floor(&Mat::vstack(&comms), tol, tol.rank_rel * n as f64 * scale)
}

/// Which branch of the general solver produced the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolvePath {
    /// All input commutators vanish; handed straight to the commuting solver.
    CommutingFastPath,
    /// Every input matrix is zero.
    AllZero,
    /// `T = {0}`.
    TrivialT,
    /// `T` is a line; its basis vector is the answer.
    LineT,
    /// Commuting solver run on the restrictions to `T`.
    RestrictedCommuting,
}

/// Result of [`common_eigenvector_report`] with the diagnostics around it.
#[derive(Debug, Clone)]
pub struct EigvecReport {
    pub result: Option<EigvecResult>,
    /// Input indices kept by the linear-independence filter.
    pub independent: Vec<usize>,
    pub closure_dim: usize,
    pub shemesh_dim: usize,
    pub stats: ClosureStats,
    pub path: SolvePath,
}

impl EigvecReport {
    pub fn removed(&self, k: usize) -> Vec<usize> {
        (0..k).filter(|i| !self.independent.contains(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    pub strategy: Strategy,
    pub parallelism: Parallelism,
}

/// Common eigenvector of an arbitrary family, or `None` when none exists.
pub fn common_eigenvector(ms: &[Mat], tol: &Tolerances) -> Result<Option<EigvecResult>> {
    Ok(common_eigenvector_report(ms, tol, &SolveOptions::default())?.result)
}

/// `rank_rel · n` relative: commutators this small are rounding noise.
fn all_numerically_commute(ms: &[Mat], tol: &Tolerances, n: usize) -> bool {
    let bound = tol.rank_rel * n as f64;
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            let c = &ms[i].matmul(&ms[j]) - &ms[j].matmul(&ms[i]);
            if c.fro_norm() > bound * ms[i].fro_norm() * ms[j].fro_norm() {
                return false;
            }
        }
    }
    true
}

/// Lie closure of the independent part of `ms` and its commutator-kernel
/// subspace `T`. `None` when every input matrix is zero.
pub fn closure_and_shemesh(
    ms: &[Mat],
    tol: &Tolerances,
    opts: &SolveOptions,
) -> Result<Option<(LieBasis, Subspace)>> {
    common_square_size(ms)?;
    let idx = independent_indices(ms, tol)?;
    if idx.is_empty() {
        return Ok(None);
    }
    let gens: Vec<Mat> = idx.iter().map(|&i| ms[i].clone()).collect();
    let basis = generate_lie_algebra(&gens, tol, opts.strategy)?;
    let t = shemesh_subspace_with(basis.elements(), tol, opts.parallelism)?;
    Ok(Some((basis, t)))
}

/// The general solver with its diagnostics.
pub fn common_eigenvector_report(
    ms: &[Mat],
    tol: &Tolerances,
    opts: &SolveOptions,
) -> Result<EigvecReport> {
    let n = common_square_size(ms)?;
    tol.validate()?;
    let independent = independent_indices(ms, tol)?;

    if independent.is_empty() {
        let mut e1 = vec![ZERO; n];
        e1[0] = C64::new(1.0, 0.0);
        return Ok(EigvecReport {
            result: Some(EigvecResult::verify(ms, &e1, tol)?),
            independent,
            closure_dim: 0,
            shemesh_dim: n,
            stats: ClosureStats::default(),
            path: SolvePath::AllZero,
        });
    }

    if all_numerically_commute(ms, tol, n) {
        let result = common_eigenvector_commuting(ms, tol)?;
        return Ok(EigvecReport {
            result: Some(result),
            closure_dim: independent.len(),
            independent,
            shemesh_dim: n,
            stats: ClosureStats::default(),
            path: SolvePath::CommutingFastPath,
        });
    }

    let gens: Vec<Mat> = independent.iter().map(|&i| ms[i].clone()).collect();
    let basis = generate_lie_algebra(&gens, tol, opts.strategy)?;
    let elements = basis.elements();
    let d = elements.len();
    let t = shemesh_subspace_with(elements, tol, opts.parallelism)?;

    let mut report = EigvecReport {
        result: None,
        independent,
        closure_dim: d,
        shemesh_dim: t.dim(),
        stats: basis.stats(),
        path: SolvePath::TrivialT,
    };
    if t.is_trivial() {
        return Ok(report);
    }
    if t.dim() == 1 {
        report.path = SolvePath::LineT;
        report.result = Some(EigvecResult::verify(ms, &t.basis().col(0), tol)?);
        return Ok(report);
    }

    let restricted: Vec<Mat> = elements
        .iter()
        .map(|a| restrict(a, &t, tol))
        .collect::<Result<_>>()
        .map_err(|e| Error::numerical("restriction to T", e.to_string()))?;
    let stack_rows = n * d * (d - 1) / 2;
    let commute_bound = 100.0 * rank_cutoff(stack_rows, n, 1.0, tol);
    for i in 0..d {
        for j in i + 1..d {
            let c = commutator(&restricted[i], &restricted[j])?.fro_norm();
            if c > commute_bound {
                return Err(Error::numerical(
                    "restriction to T",
                    format!(
                        "restrictions of closure elements {i} and {j} fail to commute \
                         (‖[Aᵢ|T, Aⱼ|T]‖ = {c:.3e} > {commute_bound:.3e}); T has dim {} and \
                         is likely over-estimated at this rank tolerance",
                        t.dim()
                    ),
                ));
            }
        }
    }

    let local: Vec<Mat> = gens
        .iter()
        .map(|a| restrict(a, &t, tol))
        .collect::<Result<_>>()
        .map_err(|e| Error::numerical("restriction to T", e.to_string()))?;
    let u = common_eigenvector_commuting(&local, tol)?;
    let v = t.basis().mul_vec(u.vector());
    report.path = SolvePath::RestrictedCommuting;
    report.result = Some(EigvecResult::verify(ms, &v, tol)?);
    Ok(report)
}
