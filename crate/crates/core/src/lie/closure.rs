use std::collections::VecDeque;

use serde::Serialize;

use super::tracker::IndependenceTracker;
use crate::error::{Error, Result};
use crate::exec::{map_range, Parallelism};
use crate::linalg::decomp::orthonormalize_cols;
use crate::linalg::mat::{common_square_size, dot, vec_norm, Mat, C64};
use crate::linalg::{commutator, Tolerances};

/// Pair-selection rule for the closure loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Every unordered pair of basis elements, each exactly once.
    AllPairs,
    /// Each accepted element is bracketed only with the original generators.
    #[default]
    #[serde(rename = "new-vs-generators")]
    NewAgainstGenerators,
}

/// Where a basis element came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum Provenance {
    Generator { index: usize },
    /// `[elements[left], elements[right]]`, normalized.
    Bracket { left: usize, right: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ClosureStats {
    pub commutators_computed: usize,
    /// Bracket elements added beyond the generators (`d − k`).
    pub elements_accepted: usize,
}

/// Basis of a matrix Lie algebra, each element of unit Frobenius norm.
#[derive(Debug, Clone)]
pub struct LieBasis {
    ambient_dim: usize,
    elements: Vec<Mat>,
    provenance: Vec<Provenance>,
    generators: usize,
    strategy: Strategy,
    stats: ClosureStats,
}

impl LieBasis {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn stats(&self) -> ClosureStats {
        self.stats
    }

    /// Orthonormal basis of the vectorized elements in ℂ^{n²}.
    fn orthonormal_vecs(&self) -> Vec<Vec<C64>> {
        let vecs: Vec<Vec<C64>> = self.elements.iter().map(|m| m.as_slice().to_vec()).collect();
        orthonormalize_cols(&vecs, 0.0)
    }

    /// Largest relative distance of `vec(m)` from the span of the elements,
    /// relative to `scale` (falls back to `‖m‖_F` when `scale` is zero).
    fn span_distance(q: &[Vec<C64>], m: &Mat, scale: f64) -> f64 {
        let r = orthogonal_remainder(q, m.as_slice());
        let denom = if scale > 0.0 { scale } else { m.fro_norm() };
        if denom == 0.0 {
            0.0
        } else {
            vec_norm(&r) / denom
        }
    }

    /// `max_{i<j} dist(vec[Bᵢ,Bⱼ], span) / (‖Bᵢ‖‖Bⱼ‖)`: zero for a closed basis.
    pub fn closure_residual(&self, mode: Parallelism) -> f64 {
        let q = self.orthonormal_vecs();
        let d = self.dim();
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
        map_range(mode, pairs.len(), |p| {
            let (i, j) = pairs[p];
            let (a, b) = (&self.elements[i], &self.elements[j]);
            let c = &a.matmul(b) - &b.matmul(a);
            Self::span_distance(&q, &c, a.fro_norm() * b.fro_norm())
        })
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Largest relative distance of an element of `other` from this span.
    pub fn span_residual(&self, other: &LieBasis) -> f64 {
        let q = self.orthonormal_vecs();
        other
            .elements
            .iter()
            .map(|m| Self::span_distance(&q, m, m.fro_norm()))
            .fold(0.0, f64::max)
    }

    /// Relative distance of `m` from this span.
    pub fn distance_from_span(&self, m: &Mat) -> f64 {
        Self::span_distance(&self.orthonormal_vecs(), m, m.fro_norm())
    }
}

/// Instrumentation counters of a finished closure run.
pub fn iteration_count(basis: &LieBasis) -> ClosureStats {
    basis.stats()
}

/// `v` minus its projection onto the orthonormal `q`, Gram-Schmidt applied twice.
fn orthogonal_remainder(q: &[Vec<C64>], v: &[C64]) -> Vec<C64> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for qi in q {
            let h = dot(qi, &r);
            for (x, y) in r.iter_mut().zip(qi) {
                *x -= y * h;
            }
        }
    }
    r
}

fn unit(m: &Mat) -> Mat {
    let n = m.fro_norm();
    if n == 0.0 {
        m.clone()
    } else {
        m.scale_real(1.0 / n)
    }
}

/// Indices of the matrices a fresh tracker keeps when fed the unit-normalized,
/// row-major vectorizations in order.
pub fn independent_indices(ms: &[Mat], tol: &Tolerances) -> Result<Vec<usize>> {
    if ms.is_empty() {
        return Ok(Vec::new());
    }
    let n = common_square_size(ms)?;
    let mut tracker = IndependenceTracker::new(n * n)?;
    let mut kept = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        if tracker.try_add(unit(m).as_slice(), tol)? {
            kept.push(i);
        }
    }
    Ok(kept)
}

/// Drop every matrix that is linearly dependent on earlier ones (zero matrices
/// included); the first occurrence wins.
pub fn remove_linearly_dependent(ms: &[Mat], tol: &Tolerances) -> Result<Vec<Mat>> {
    Ok(independent_indices(ms, tol)?
        .into_iter()
        .map(|i| ms[i].clone())
        .collect())
}

struct Closure<'a> {
    n: usize,
    tol: &'a Tolerances,
    tracker: IndependenceTracker,
    /// Orthonormal basis of the vectorized elements.
    ortho: Vec<Vec<C64>>,
    elements: Vec<Mat>,
    provenance: Vec<Provenance>,
    stats: ClosureStats,
}

impl Closure<'_> {
    fn full(&self) -> bool {
        self.elements.len() == self.n * self.n
    }

    fn push(&mut self, m: Mat, p: Provenance) {
        let r = orthogonal_remainder(&self.ortho, m.as_slice());
        let rn = vec_norm(&r);
        self.ortho.push(r.into_iter().map(|z| z / rn).collect());
        self.elements.push(m);
        self.provenance.push(p);
    }

    /// Bracket elements `left` and `right`; keep the result if it is new.
    fn bracket(&mut self, left: usize, right: usize) -> Result<bool> {
        self.stats.commutators_computed += 1;
        let c = commutator(&self.elements[left], &self.elements[right])?;
        // The bracket carries rounding error of the size of its unit-norm
        // inputs, not of its own norm. A new direction at or below that level
        // is noise; normalizing it first would make it look genuine.
        let fresh = vec_norm(&orthogonal_remainder(&self.ortho, c.as_slice()));
        if fresh <= self.tol.rank_rel * (self.n * self.n) as f64 {
            return Ok(false);
        }
        let c = c.scale_real(1.0 / c.fro_norm());
        if self.tracker.try_add(c.as_slice(), self.tol)? {
            self.push(c, Provenance::Bracket { left, right });
            self.stats.elements_accepted += 1;
            Ok(true)
        } else {
            Ok(false)
        }
    }
}

/// Basis of the Lie algebra generated by `generators`.
///
/// Generators must be linearly independent (see [`remove_linearly_dependent`]).
/// A bracket whose component orthogonal to the current span is below
/// `rank_rel · n²` is discarded outright; the rest are normalized to unit
/// Frobenius norm and offered to the elimination tracker. The loop stops as
/// soon as the dimension reaches `n²`.
pub fn generate_lie_algebra(
    generators: &[Mat],
    tol: &Tolerances,
    strategy: Strategy,
) -> Result<LieBasis> {
    if generators.is_empty() {
        return Err(Error::Precondition("no generators given".into()));
    }
    let n = common_square_size(generators)?;
    let mut cl = Closure {
        n,
        tol,
        tracker: IndependenceTracker::new(n * n)?,
        ortho: Vec::with_capacity(generators.len()),
        elements: Vec::with_capacity(generators.len()),
        provenance: Vec::with_capacity(generators.len()),
        stats: ClosureStats::default(),
    };
    for (i, g) in generators.iter().enumerate() {
        let u = unit(g);
        if !cl.tracker.try_add(u.as_slice(), tol)? {
            return Err(Error::Precondition(format!(
                "generator {i} is linearly dependent on the preceding generators"
            )));
        }
        cl.push(u, Provenance::Generator { index: i });
    }
    let k = generators.len();

    match strategy {
        Strategy::AllPairs => {
            // pairs (i, j), i < j, visited in order of j; elements appended
            // during the sweep are reached by the growing outer bound
            let mut j = 1;
            'outer: while j < cl.elements.len() {
                for i in 0..j {
                    if cl.full() {
                        break 'outer;
                    }
                    cl.bracket(i, j)?;
                }
                j += 1;
            }
        }
        Strategy::NewAgainstGenerators => {
            let mut queue: VecDeque<usize> = (0..k).collect();
            'queue: while let Some(x) = queue.pop_front() {
                // among generators only g < x, by antisymmetry
                let upto = if x < k { x } else { k };
                for g in 0..upto {
                    if cl.full() {
                        break 'queue;
                    }
                    if cl.bracket(g, x)? {
                        queue.push_back(cl.elements.len() - 1);
                    }
                }
            }
        }
    }

    Ok(LieBasis {
        ambient_dim: n,
        elements: cl.elements,
        provenance: cl.provenance,
        generators: k,
        strategy,
        stats: cl.stats,
    })
}
