//! Simultaneous unitary triangulation by repeated common-eigenvector
//! extraction and deflation.

use serde::Serialize;

use crate::eigvec::{common_eigenvector_report, SolveOptions};
use crate::error::{Error, Result};
use crate::linalg::decomp::{householder_vector, reflect_cols, reflect_rows};
use crate::linalg::mat::{common_square_size, Mat, C64};
use crate::linalg::Tolerances;

/// Deflated columns must vanish below the diagonal to this relative level.
pub const DEFLATION_REL: f64 = 1e-8;
pub const RECONSTRUCTION_REL: f64 = 1e-8;
/// Per-dimension unitarity bound on `‖Q^*Q − I‖_F`.
pub const UNITARY_REL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct TriangulationResult {
    q: Mat,
    triangs: Vec<Mat>,
    diagonal_sequences: Vec<Vec<C64>>,
}

/// One verified invariant of a triangulation.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            value,
            bound,
            pass: value <= bound,
        }
    }
}

impl TriangulationResult {
    /// Unitary basis change.
    pub fn q(&self) -> &Mat {
        &self.q
    }

    /// `Q^* Aᵢ Q`, aligned with the input.
    pub fn triangs(&self) -> &[Mat] {
        &self.triangs
    }

    /// Diagonal of each triangular form, in flag order.
    pub fn diagonal_sequences(&self) -> &[Vec<C64>] {
        &self.diagonal_sequences
    }

    /// Largest strictly-lower entry modulus of each triangular form.
    pub fn strictly_lower_max(&self) -> Vec<f64> {
        self.triangs.iter().map(Mat::strictly_lower_max).collect()
    }

    /// Re-verify every invariant against the original matrices.
    pub fn checks(&self, ms: &[Mat], tol: &Tolerances) -> Vec<Check> {
        let n = self.q.rows();
        let qq = self.q.adjoint_mul(&self.q);
        let mut out = vec![Check::new(
            "q_unitary",
            (&qq - &Mat::identity(n)).fro_norm(),
            UNITARY_REL * n as f64,
        )];
        for (i, (a, t)) in ms.iter().zip(&self.triangs).enumerate() {
            let na = a.fro_norm();
            out.push(Check::new(
                format!("strictly_lower[{i}]"),
                t.strictly_lower_max(),
                tol.residual_rel * na,
            ));
            let recon = self.q.matmul(t).matmul(&self.q.adjoint());
            let err = (&recon - a).fro_norm();
            let rel = if na == 0.0 { err } else { err / na };
            out.push(Check::new(format!("reconstruction[{i}]"), rel, RECONSTRUCTION_REL));
        }
        out
    }
}

/// Outcome of the deflation loop.
#[derive(Debug, Clone)]
pub enum Triangulation {
    Triangulated(TriangulationResult),
    /// No common eigenvector of the trailing blocks at `depth`.
    NotTriangulable { depth: usize, closure_dim: usize },
}

impl Triangulation {
    pub fn into_option(self) -> Option<TriangulationResult> {
        match self {
            Triangulation::Triangulated(r) => Some(r),
            Triangulation::NotTriangulable { .. } => None,
        }
    }
}

fn at_depth(depth: usize) -> impl Fn(Error) -> Error {
    move |e| Error::AtDepth {
        depth,
        source: Box::new(e),
    }
}

/// Deflation loop with explicit options and failure depth.
///
/// At depth `j` the trailing `(n−j)×(n−j)` blocks are handed to the general
/// common-eigenvector solver. A Householder reflection sending the eigenvector
/// to `e₁` conjugates the blocks, is accumulated into `Q`, and the loop moves
/// one step down the diagonal.
pub fn triangulate(ms: &[Mat], tol: &Tolerances, opts: &SolveOptions) -> Result<Triangulation> {
    let n = common_square_size(ms)?;
    let mut q = Mat::identity(n);
    let mut cur: Vec<Mat> = ms.to_vec();

    for depth in 0..n.saturating_sub(1) {
        let blocks: Vec<Mat> = cur.iter().map(|a| a.trailing(depth)).collect();
        let report = common_eigenvector_report(&blocks, tol, opts).map_err(at_depth(depth))?;
        let Some(found) = report.result else {
            return Ok(Triangulation::NotTriangulable {
                depth,
                closure_dim: report.closure_dim,
            });
        };
        let (u, _) = householder_vector(found.vector());
        if let Some(u) = u {
            for a in cur.iter_mut() {
                reflect_rows(a, &u, depth, 0);
                reflect_cols(a, &u, depth);
            }
            reflect_cols(&mut q, &u, depth);
        }
        for (i, (a, block)) in cur.iter().zip(&blocks).enumerate() {
            let below: f64 = (depth + 1..n).map(|r| a[(r, depth)].norm_sqr()).sum::<f64>().sqrt();
            let bound = DEFLATION_REL * block.fro_norm();
            if below > bound {
                return Err(at_depth(depth)(Error::numerical(
                    "deflation",
                    format!(
                        "matrix {i}: first column below the diagonal has norm {below:.3e} > {bound:.3e}"
                    ),
                )));
            }
        }
    }

    let result = TriangulationResult {
        diagonal_sequences: cur.iter().map(Mat::diagonal).collect(),
        triangs: cur,
        q,
    };
    if let Some(bad) = result.checks(ms, tol).into_iter().find(|c| !c.pass) {
        return Err(Error::numerical(
            "triangulation check",
            format!("{} = {:.3e} exceeds {:.3e}", bad.name, bad.value, bad.bound),
        ));
    }
    Ok(Triangulation::Triangulated(result))
}

/// Unitary `Q` with every `Q^* Aᵢ Q` upper triangular, or `None` when the
/// family has no complete flag of common invariant subspaces.
pub fn simultaneous_triangulation(ms: &[Mat], tol: &Tolerances) -> Result<Option<TriangulationResult>> {
    Ok(triangulate(ms, tol, &SolveOptions::default())?.into_option())
}

pub fn is_simultaneously_triangulable(ms: &[Mat], tol: &Tolerances) -> Result<bool> {
    Ok(simultaneous_triangulation(ms, tol)?.is_some())
}
