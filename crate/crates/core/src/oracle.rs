//! Reference implementations for verification: the exhaustive
//! eigenvalue-combination search and seeded instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::eigvec::EigvecResult;
use crate::error::{Error, Result};
use crate::exec::{map_range, Parallelism};
use crate::linalg::decomp::{inverse, qr};
use crate::linalg::mat::{common_square_size, Mat, C64, ONE, ZERO};
use crate::linalg::ops::kernel_with_cutoff;
use crate::linalg::{rank_cutoff, schur_eigenspaces, Tolerances};

/// Largest `n^k` the brute-force search accepts.
pub const COMBINATION_LIMIT: u128 = 1_000_000;

/// Every common eigenvector found by trying all eigenvalue tuples.
///
/// For each tuple `(λ₁,…,λ_k)` drawn from the clustered spectra, the stack
/// `[A₁ − λ₁I; …; A_k − λ_kI]` is searched for a null vector. The eigenvalues
/// themselves are only known to within the clustering radius, so singular
/// values up to `eig_cluster_rel · ‖stack‖_F` count as zero; every candidate is
/// then residual-checked, which keeps the output sound.
pub fn brute_force_common_eigenvector(ms: &[Mat], tol: &Tolerances) -> Result<Vec<EigvecResult>> {
    brute_force_with(ms, tol, Parallelism::default())
}

pub fn combination_count(n: usize, k: usize) -> u128 {
    (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX)
}

pub fn brute_force_with(ms: &[Mat], tol: &Tolerances, mode: Parallelism) -> Result<Vec<EigvecResult>> {
    let n = common_square_size(ms)?;
    let combos = combination_count(n, ms.len());
    if combos > COMBINATION_LIMIT {
        return Err(Error::RefusedInstance {
            combinations: combos,
            limit: COMBINATION_LIMIT,
        });
    }
    let spectra: Vec<Vec<C64>> = ms
        .iter()
        .map(|a| Ok(schur_eigenspaces(a, tol)?.eigenvalues()))
        .collect::<Result<_>>()?;
    let total: usize = spectra.iter().map(Vec::len).product();

    let found = map_range(mode, total, |t| -> Result<Option<EigvecResult>> {
        // mixed radix, last matrix varying fastest
        let mut rest = t;
        let mut lambdas = vec![ZERO; ms.len()];
        for i in (0..ms.len()).rev() {
            lambdas[i] = spectra[i][rest % spectra[i].len()];
            rest /= spectra[i].len();
        }
        let shifted: Vec<Mat> = ms.iter().zip(&lambdas).map(|(a, &l)| a.shift(l)).collect();
        let stack = Mat::vstack(&shifted);
        let sigma_max = stack.fro_norm();
        let cutoff = rank_cutoff(stack.rows(), n, sigma_max, tol).max(tol.eig_cluster_rel * sigma_max);
        let (space, _) = kernel_with_cutoff(&stack, cutoff)?;
        if space.is_trivial() {
            return Ok(None);
        }
        let r = EigvecResult::measure(ms, &space.basis().col(0))?;
        Ok((r.max_residual() <= tol.residual_rel).then_some(r))
    });
    found
        .into_iter()
        .filter_map(|r| r.transpose())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InstanceKind {
    /// `U^* Tᵢ U` for random upper-triangular `Tᵢ` and a Haar unitary `U`.
    TriangulableConjugated,
    /// Random polynomials of degree `< n` in one random diagonalizable matrix.
    CommutingPolynomials,
    /// Independent complex Gaussian matrices.
    GenericRandom,
    /// `E, F, H` of sl₂ in the top-left 2×2 block, random diagonal elsewhere.
    /// For `n = 2`, `k ≥ 2` there is no common eigenvector; for `n > 2` the
    /// padding coordinates `e₃…eₙ` are common eigenvectors. Matrices past the
    /// third are random diagonal.
    Sl2Embedded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n: usize,
    pub k: usize,
    pub kind: InstanceKind,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(kind: InstanceKind, n: usize, k: usize, seed: u64) -> Self {
        InstanceSpec { n, k, kind, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.k == 0 {
            return Err(Error::Input(format!(
                "instance needs n ≥ 1 and k ≥ 1, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        if self.kind == InstanceKind::Sl2Embedded && self.n < 2 {
            return Err(Error::Input("Sl2Embedded needs n ≥ 2".into()));
        }
        Ok(())
    }
}

pub(crate) fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Mat {
    Mat::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// phases of `diag(R)` folded back into `Q`.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> Mat {
    let g = gaussian_matrix(n, n, rng);
    let (mut q, r) = qr(&g);
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d == ZERO { ONE } else { d / d.norm() };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn random_upper(n: usize, rng: &mut impl Rng) -> Mat {
    let mut t = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            t[(i, j)] = gaussian(rng);
        }
    }
    t
}

/// Seed-determined test instance.
pub fn make_instance(spec: &InstanceSpec) -> Result<Vec<Mat>> {
    spec.validate()?;
    let InstanceSpec { n, k, kind, seed } = *spec;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = match kind {
        InstanceKind::TriangulableConjugated => {
            let ts: Vec<Mat> = (0..k).map(|_| random_upper(n, &mut rng)).collect();
            let u = haar_unitary(n, &mut rng);
            ts.iter().map(|t| u.adjoint().matmul(t).matmul(&u)).collect()
        }
        InstanceKind::CommutingPolynomials => {
            let d: Vec<C64> = (0..n).map(|_| gaussian(&mut rng)).collect();
            let s = gaussian_matrix(n, n, &mut rng);
            let a = s.matmul(&Mat::diag(&d)).matmul(&inverse(&s)?);
            (0..k)
                .map(|_| {
                    let coeffs: Vec<C64> = (0..n).map(|_| gaussian(&mut rng)).collect();
                    // Horner
                    let mut p = Mat::identity(n).scale(coeffs[n - 1]);
                    for &c in coeffs[..n - 1].iter().rev() {
                        p = p.matmul(&a);
                        for i in 0..n {
                            p[(i, i)] += c;
                        }
                    }
                    p
                })
                .collect()
        }
        InstanceKind::GenericRandom => (0..k).map(|_| gaussian_matrix(n, n, &mut rng)).collect(),
        InstanceKind::Sl2Embedded => {
            let sl2 = [
                [[0.0, 1.0], [0.0, 0.0]],
                [[0.0, 0.0], [1.0, 0.0]],
                [[1.0, 0.0], [0.0, -1.0]],
            ];
            (0..k)
                .map(|i| {
                    let mut m = Mat::zeros(n, n);
                    if i < 3 {
                        for r in 0..2 {
                            for c in 0..2 {
                                m[(r, c)] = C64::new(sl2[i][r][c], 0.0);
                            }
                        }
                        for j in 2..n {
                            m[(j, j)] = gaussian(&mut rng);
                        }
                    } else {
                        for j in 0..n {
                            m[(j, j)] = gaussian(&mut rng);
                        }
                    }
                    m
                })
                .collect()
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_diag_pair() {
        let tol = Tolerances::default();
        let r = brute_force_common_eigenvector(&[Mat::real_diag(&[1.0, 2.0]), Mat::real_diag(&[3.0, 4.0])], &tol).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].eigenvalues()[0] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((r[0].eigenvalues()[1] - C64::new(3.0, 0.0)).norm() < 1e-14);
        assert!((r[0].vector()[0] - ONE).norm() < 1e-14);
        assert!((r[1].eigenvalues()[0] - C64::new(2.0, 0.0)).norm() < 1e-14);
        assert!((r[1].eigenvalues()[1] - C64::new(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn brute_force_sl2_empty() {
        let tol = Tolerances::default();
        let ms = make_instance(&InstanceSpec::new(InstanceKind::Sl2Embedded, 2, 2, 0)).unwrap();
        assert!(brute_force_common_eigenvector(&ms, &tol).unwrap().is_empty());
    }

    #[test]
    fn brute_force_identity() {
        let r = brute_force_common_eigenvector(&[Mat::identity(2)], &Tolerances::default()).unwrap();
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn guard_refuses_large_products() {
        let ms = vec![Mat::identity(10); 7];
        assert!(matches!(
            brute_force_common_eigenvector(&ms, &Tolerances::default()),
            Err(Error::RefusedInstance { combinations: 10_000_000, .. })
        ));
        assert_eq!(combination_count(4, 6), 4096);
    }

    #[test]
    fn sl2_generator_is_exact() {
        let ms = make_instance(&InstanceSpec::new(InstanceKind::Sl2Embedded, 2, 2, 99)).unwrap();
        assert_eq!(ms[0], Mat::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]));
        assert_eq!(ms[1], Mat::from_real_rows(&[[0.0, 0.0], [1.0, 0.0]]));
        assert!(make_instance(&InstanceSpec::new(InstanceKind::Sl2Embedded, 1, 1, 0)).is_err());
    }

    #[test]
    fn seeded_determinism() {
        let spec = InstanceSpec::new(InstanceKind::CommutingPolynomials, 3, 2, 1234);
        assert_eq!(make_instance(&spec).unwrap(), make_instance(&spec).unwrap());
        let other = InstanceSpec { seed: 1235, ..spec };
        assert_ne!(make_instance(&spec).unwrap(), make_instance(&other).unwrap());
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = haar_unitary(6, &mut rng);
        assert!(u.adjoint_mul(&u).max_abs_diff(&Mat::identity(6)) < 1e-14);
    }

    #[test]
    fn invalid_spec() {
        assert!(make_instance(&InstanceSpec::new(InstanceKind::GenericRandom, 0, 1, 0)).is_err());
        assert!(make_instance(&InstanceSpec::new(InstanceKind::GenericRandom, 2, 0, 0)).is_err());
    }
}
