//! The JSON matrix-set file read and written by the CLI.
//!
//! ```json
//! {
//!   "format": 1,
//!   "n": 2,
//!   "matrices": [
//!     { "name": "A", "entries": [[1, 0], [0, 0], [0, 0], [2, 0]] }
//!   ],
//!   "tolerances": { "residual_rel": 1e-9 }
//! }
//! ```
//!
//! `entries` lists the `n²` complex entries in row-major order as `[re, im]`
//! pairs. Instead of `matrices` a file may carry an `instance_spec`
//! (`{"kind": "TriangulableConjugated", "n": 5, "k": 3, "seed": 7}`); exactly
//! one of the two must be present.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat, Tolerances, C64};
use crate::oracle::{make_instance, InstanceSpec};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMatrix {
    pub name: String,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eig_cluster_rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_rel: Option<f64>,
}

impl ToleranceOverrides {
    /// `self` wins over `base` field by field.
    pub fn over(self, base: ToleranceOverrides) -> ToleranceOverrides {
        ToleranceOverrides {
            rank_rel: self.rank_rel.or(base.rank_rel),
            eig_cluster_rel: self.eig_cluster_rel.or(base.eig_cluster_rel),
            residual_rel: self.residual_rel.or(base.residual_rel),
        }
    }

    pub fn resolve(self) -> Result<Tolerances> {
        let d = Tolerances::default();
        Tolerances::new(
            self.rank_rel.unwrap_or(d.rank_rel),
            self.eig_cluster_rel.unwrap_or(d.eig_cluster_rel),
            self.residual_rel.unwrap_or(d.residual_rel),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSetFile {
    pub format: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<NamedMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_spec: Option<InstanceSpec>,
    /// Informational: the instance spec an explicit matrix list was generated from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_from: Option<InstanceSpec>,
}

/// A validated matrix family ready for the solvers.
#[derive(Debug, Clone)]
pub struct MatrixSet {
    pub n: usize,
    pub names: Vec<String>,
    pub matrices: Vec<Mat>,
    pub tolerances: ToleranceOverrides,
}

pub fn matrix_to_entries(m: &Mat) -> Vec<[f64; 2]> {
    m.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

pub fn complex_pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

impl MatrixSetFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed matrix file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix files always serialize")
    }

    pub fn from_matrices(names: &[String], ms: &[Mat]) -> Self {
        MatrixSetFile {
            format: FORMAT_VERSION,
            n: ms.first().map_or(0, Mat::rows),
            matrices: Some(
                names
                    .iter()
                    .zip(ms)
                    .map(|(name, m)| NamedMatrix {
                        name: name.clone(),
                        entries: matrix_to_entries(m),
                    })
                    .collect(),
            ),
            tolerances: None,
            instance_spec: None,
            generated_from: None,
        }
    }

    /// Check every field-level invariant and materialize the matrices.
    pub fn load(&self) -> Result<MatrixSet> {
        if self.format != FORMAT_VERSION {
            return Err(Error::Input(format!(
                "field `format`: unsupported version {}, expected {FORMAT_VERSION}",
                self.format
            )));
        }
        let n = self.n;
        if n == 0 {
            return Err(Error::Input("field `n`: must be at least 1".into()));
        }
        let tolerances = self.tolerances.unwrap_or_default();
        let (names, matrices) = match (&self.matrices, &self.instance_spec) {
            (Some(_), Some(_)) => {
                return Err(Error::Input(
                    "fields `matrices` and `instance_spec` are mutually exclusive".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Input(
                    "one of the fields `matrices` or `instance_spec` is required".into(),
                ))
            }
            (Some(list), None) => {
                if list.is_empty() {
                    return Err(Error::Input("field `matrices`: list is empty".into()));
                }
                let mut seen = HashSet::new();
                let mut ms = Vec::with_capacity(list.len());
                for (i, nm) in list.iter().enumerate() {
                    if !seen.insert(nm.name.as_str()) {
                        return Err(Error::Input(format!(
                            "field `matrices[{i}].name`: duplicate name {:?}",
                            nm.name
                        )));
                    }
                    if nm.entries.len() != n * n {
                        return Err(Error::Input(format!(
                            "field `matrices[{i}].entries` ({:?}): {} entries, expected n² = {}",
                            nm.name,
                            nm.entries.len(),
                            n * n
                        )));
                    }
                    let data = nm.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
                    let m = Mat::new(n, n, data).map_err(|e| {
                        Error::Input(format!("field `matrices[{i}].entries` ({:?}): {e}", nm.name))
                    })?;
                    ms.push(m);
                }
                (list.iter().map(|m| m.name.clone()).collect(), ms)
            }
            (None, Some(spec)) => {
                if spec.n != n {
                    return Err(Error::Input(format!(
                        "field `instance_spec.n` = {} disagrees with `n` = {n}",
                        spec.n
                    )));
                }
                let ms = make_instance(spec)?;
                ((0..ms.len()).map(|i| format!("A{i}")).collect(), ms)
            }
        };
        Ok(MatrixSet {
            n,
            names,
            matrices,
            tolerances,
        })
    }
}
