use crate::error::{Error, Result};
use crate::linalg::mat::{vec_norm, Mat, C64, ZERO};
use crate::linalg::Tolerances;

/// Incremental linear-independence test by continued Gaussian elimination.
///
/// The tracker keeps the accumulated row operations `R` (an `r×r` matrix) and
/// the eliminated kept columns `E = R·[v₁ … v_s]`, which is upper triangular
/// with a non-zero pivot in every column. A new vector `v` is independent
/// exactly when `R·v` has a non-negligible tail below row `s`. Each call costs
/// `O(r²)`.
///
/// Elimination of a candidate runs on a scratch copy; `R` and `E` are only
/// written once the candidate is accepted, so a rejected vector leaves the
/// tracker exactly as it was.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceTracker {
    vector_dim: usize,
    row_ops: Mat,
    echelon: Vec<Vec<C64>>,
}

impl IndependenceTracker {
    pub fn new(vector_dim: usize) -> Result<Self> {
        if vector_dim == 0 {
            return Err(Error::Input("tracker vector dimension must be at least 1".into()));
        }
        Ok(IndependenceTracker {
            vector_dim,
            row_ops: Mat::identity(vector_dim),
            echelon: Vec::new(),
        })
    }

    pub fn vector_dim(&self) -> usize {
        self.vector_dim
    }

    pub fn kept(&self) -> usize {
        self.echelon.len()
    }

    pub fn is_full(&self) -> bool {
        self.kept() == self.vector_dim
    }

    /// Accumulated row operations `R`.
    pub fn row_ops(&self) -> &Mat {
        &self.row_ops
    }

    /// `R` applied to the kept vectors, `r × kept`, upper triangular.
    pub fn echelon(&self) -> Mat {
        Mat::from_cols(self.vector_dim, &self.echelon)
    }

    /// Norm of the part of `v` outside the span of the kept vectors, measured
    /// after elimination (i.e. in `R`-coordinates).
    pub fn elimination_residual(&self, v: &[C64]) -> Result<f64> {
        self.check_len(v)?;
        let w = self.row_ops.mul_vec(v);
        Ok(vec_norm(&w[self.kept()..]))
    }

    fn check_len(&self, v: &[C64]) -> Result<()> {
        if v.len() != self.vector_dim {
            return Err(Error::Input(format!(
                "vector of length {} offered to a tracker of dimension {}",
                v.len(),
                self.vector_dim
            )));
        }
        Ok(())
    }

    /// Keep `v` if its eliminated tail exceeds `rank_rel · r · ‖v‖`; returns
    /// whether it was kept.
    pub fn try_add(&mut self, v: &[C64], tol: &Tolerances) -> Result<bool> {
        self.check_len(v)?;
        let s = self.kept();
        if s == self.vector_dim {
            return Ok(false);
        }
        let vn = vec_norm(v);
        if vn == 0.0 {
            return Ok(false);
        }
        let mut w = self.row_ops.mul_vec(v);
        let tail = vec_norm(&w[s..]);
        if tail <= tol.rank_rel * self.vector_dim as f64 * vn {
            return Ok(false);
        }

        // partial pivoting over the tail
        let (pivot, _) = w[s..]
            .iter()
            .enumerate()
            .map(|(i, z)| (i + s, z.norm()))
            .fold((s, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot != s {
            w.swap(s, pivot);
            let r = self.vector_dim;
            for j in 0..r {
                let a = self.row_ops[(s, j)];
                self.row_ops[(s, j)] = self.row_ops[(pivot, j)];
                self.row_ops[(pivot, j)] = a;
            }
        }
        let p = w[s];
        for i in s + 1..self.vector_dim {
            if w[i] == ZERO {
                continue;
            }
            let l = w[i] / p;
            for j in 0..self.vector_dim {
                let rs = self.row_ops[(s, j)];
                self.row_ops[(i, j)] -= l * rs;
            }
            w[i] = ZERO;
        }
        self.echelon.push(w);
        Ok(true)
    }
}
