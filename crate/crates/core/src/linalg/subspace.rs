use super::decomp::orthonormalize_cols;
use super::mat::{vec_norm, Mat, C64};
use crate::error::{Error, Result};

/// Linear subspace of ℂⁿ carried by an orthonormal basis (`n×r`, `r` may be 0).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Mat,
}

impl Subspace {
    /// Orthonormalize `cols` and wrap them. Columns dependent on earlier ones
    /// (relative remainder below 1e-10) are dropped.
    pub fn from_columns(ambient_dim: usize, cols: &[Vec<C64>]) -> Result<Self> {
        if let Some(c) = cols.iter().find(|c| c.len() != ambient_dim) {
            return Err(Error::Input(format!(
                "basis vector of length {} in a space of dimension {ambient_dim}",
                c.len()
            )));
        }
        let q = orthonormalize_cols(cols, 1e-10);
        Ok(Subspace {
            ambient_dim,
            basis: Mat::from_cols(ambient_dim, &q),
        })
    }

    /// Orthonormalize the columns of `basis`.
    pub fn from_basis(basis: &Mat) -> Result<Self> {
        let cols: Vec<Vec<C64>> = (0..basis.cols()).map(|j| basis.col(j)).collect();
        Subspace::from_columns(basis.rows(), &cols)
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: Mat::identity(n),
        }
    }

    pub fn trivial(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: Mat::zeros(n, 0),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// `‖B^* B − I‖_F`.
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.basis.adjoint_mul(&self.basis);
        (&g - &Mat::identity(self.dim())).fro_norm()
    }

    /// Orthogonal projection `B B^* v`.
    pub fn project(&self, v: &[C64]) -> Vec<C64> {
        let coeffs = self.basis.adjoint().mul_vec(v);
        self.basis.mul_vec(&coeffs)
    }

    /// `‖v − P v‖ / ‖v‖`; zero for the zero vector.
    pub fn relative_distance(&self, v: &[C64]) -> f64 {
        let nv = vec_norm(v);
        if nv == 0.0 {
            return 0.0;
        }
        let p = self.project(v);
        let r: Vec<C64> = v.iter().zip(&p).map(|(a, b)| a - b).collect();
        vec_norm(&r) / nv
    }

    /// Largest relative distance of a basis vector of `other` from `self`;
    /// zero iff `other ⊆ self` up to rounding.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        (0..other.dim())
            .map(|j| self.relative_distance(&other.basis.col(j)))
            .fold(0.0, f64::max)
    }

    /// Map a subspace expressed in this space's coordinates back into ℂⁿ.
    pub fn lift(&self, local: &Subspace) -> Result<Subspace> {
        if local.ambient_dim != self.dim() {
            return Err(Error::Input(format!(
                "cannot lift a subspace of ℂ^{} through a {}-dimensional space",
                local.ambient_dim,
                self.dim()
            )));
        }
        Subspace::from_basis(&self.basis.matmul(&local.basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat::{ONE, ZERO};

    #[test]
    fn full_and_trivial() {
        assert_eq!(Subspace::full(3).dim(), 3);
        assert_eq!(Subspace::trivial(3).dim(), 0);
        assert!(Subspace::full(3).orthonormality_error() == 0.0);
    }

    #[test]
    fn lift_composes_bases() {
        let outer = Subspace::from_columns(3, &[vec![ZERO, ONE, ZERO], vec![ZERO, ZERO, ONE]]).unwrap();
        let local = Subspace::from_columns(2, &[vec![ZERO, ONE]]).unwrap();
        let lifted = outer.lift(&local).unwrap();
        assert_eq!(lifted.dim(), 1);
        assert!(lifted.relative_distance(&[ZERO, ZERO, ONE]) < 1e-15);
        assert!(outer.lift(&Subspace::full(3)).is_err());
    }
}
