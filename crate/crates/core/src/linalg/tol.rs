use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative thresholds used for every numerical decision in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Singular values at or below `rank_rel · max(rows, cols) · σ_max` count as zero.
    pub rank_rel: f64,
    /// Eigenvalues closer than `eig_cluster_rel · ‖A‖_F` are treated as one.
    pub eig_cluster_rel: f64,
    /// Bound for eigen-residuals and invariance checks, relative to `‖A‖_F`.
    pub residual_rel: f64,
}

impl Tolerances {
    /// 2^-45, about 2.8e-14.
    pub const DEFAULT_RANK_REL: f64 = 2.842170943040401e-14;
    pub const DEFAULT_EIG_CLUSTER_REL: f64 = 1e-8;
    pub const DEFAULT_RESIDUAL_REL: f64 = 1e-8;

    pub fn new(rank_rel: f64, eig_cluster_rel: f64, residual_rel: f64) -> Result<Self> {
        let t = Tolerances {
            rank_rel,
            eig_cluster_rel,
            residual_rel,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_rel", self.rank_rel),
            ("eig_cluster_rel", self.eig_cluster_rel),
            ("residual_rel", self.residual_rel),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Input(format!(
                    "tolerance {name} = {v} must lie strictly between 0 and 1"
                )));
            }
        }
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_rel: Self::DEFAULT_RANK_REL,
            eig_cluster_rel: Self::DEFAULT_EIG_CLUSTER_REL,
            residual_rel: Self::DEFAULT_RESIDUAL_REL,
        }
    }
}
