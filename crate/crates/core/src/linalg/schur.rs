//! Complex Schur decomposition `A = Z T Z^*` by Householder reduction to
//! Hessenberg form followed by single-shift implicit QR sweeps.

use super::decomp::{householder_vector, reflect_cols, reflect_rows};
use super::mat::{Mat, C64, ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Schur {
    /// Unitary Schur vectors.
    pub z: Mat,
    /// Upper-triangular Schur form.
    pub t: Mat,
    pub iterations: usize,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.t.diagonal()
    }
}

/// Reduce `a` to upper Hessenberg form, returning `(h, q)` with `a = q h q^*`.
pub fn hessenberg(a: &Mat) -> (Mat, Mat) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = Mat::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        if x[1..].iter().all(|z| *z == ZERO) {
            continue;
        }
        let (u, alpha) = householder_vector(&x);
        let Some(u) = u else { continue };
        reflect_rows(&mut h, &u, k + 1, k);
        reflect_cols(&mut h, &u, k + 1);
        reflect_cols(&mut q, &u, k + 1);
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

/// Givens rotation `G = [[c, s], [-conj(s), c]]` with `G [x; y] = [r; 0]`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    if y == ZERO {
        return (1.0, ZERO);
    }
    if x == ZERO {
        return (0.0, y.conj() / y.norm());
    }
    let xn = x.norm();
    let norm = xn.hypot(y.norm());
    let phase = x / xn;
    (xn / norm, phase * y.conj() / norm)
}

fn rot_rows(h: &mut Mat, k: usize, c: f64, s: C64, c0: usize) {
    for j in c0..h.cols() {
        let a = h[(k, j)];
        let b = h[(k + 1, j)];
        h[(k, j)] = a * c + s * b;
        h[(k + 1, j)] = -s.conj() * a + b * c;
    }
}

fn rot_cols(h: &mut Mat, k: usize, c: f64, s: C64, r1: usize) {
    for i in 0..r1 {
        let a = h[(i, k)];
        let b = h[(i, k + 1)];
        h[(i, k)] = a * c + b * s.conj();
        h[(i, k + 1)] = -s * a + b * c;
    }
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition. Fails with [`Error::NoConvergence`] after
/// `30 · max(10, n)` QR sweeps.
pub fn schur(a: &Mat) -> Result<Schur> {
    if !a.is_square() {
        return Err(Error::Input(format!(
            "Schur decomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let (mut h, mut z) = hessenberg(a);
    let max_iter = 30 * n.max(10);
    let mut total = 0usize;
    let eps = f64::EPSILON;
    let small = f64::MIN_POSITIVE / eps;

    let mut hi = n;
    let mut since_deflation = 0usize;
    while hi > 1 {
        // find the start of the unreduced block ending at hi-1
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if diag == 0.0 {
                diag = h.max_abs();
            }
            if sub <= eps * diag || sub < small {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(Error::NoConvergence { iterations: total });
        }

        let m = hi - 1;
        let mu = if since_deflation.is_multiple_of(10) {
            // exceptional shift to break cycles
            h[(m, m)] + C64::new(0.75 * h[(m, m - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(m - 1, m - 1)], h[(m - 1, m)], h[(m, m - 1)], h[(m, m)])
        };

        let (c, s) = givens(h[(lo, lo)] - mu, h[(lo + 1, lo)]);
        rot_rows(&mut h, lo, c, s, lo);
        rot_cols(&mut h, lo, c, s, (lo + 3).min(hi));
        rot_cols(&mut z, lo, c, s, n);
        for k in lo + 1..hi - 1 {
            let (c, s) = givens(h[(k, k - 1)], h[(k + 1, k - 1)]);
            rot_rows(&mut h, k, c, s, k - 1);
            h[(k + 1, k - 1)] = ZERO;
            rot_cols(&mut h, k, c, s, (k + 3).min(hi));
            rot_cols(&mut z, k, c, s, n);
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(Schur {
        z,
        t: h,
        iterations: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg_matrix(n: usize, seed: u64) -> Mat {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        Mat::from_fn(n, n, |_, _| C64::new(next(), next()))
    }

    fn check(a: &Mat) {
        let s = schur(a).unwrap();
        let n = a.rows();
        assert!(s.z.adjoint_mul(&s.z).max_abs_diff(&Mat::identity(n)) < 1e-13);
        let recon = s.z.matmul(&s.t).matmul(&s.z.adjoint());
        assert!(
            (&recon - a).fro_norm() <= 1e-13 * a.fro_norm().max(1.0),
            "reconstruction error {}",
            (&recon - a).fro_norm()
        );
        assert_eq!(s.t.strictly_lower_max(), 0.0);
    }

    #[test]
    fn hessenberg_shape() {
        let a = lcg_matrix(6, 1);
        let (h, q) = hessenberg(&a);
        for i in 2..6 {
            for j in 0..i - 1 {
                assert_eq!(h[(i, j)], ZERO);
            }
        }
        let recon = q.matmul(&h).matmul(&q.adjoint());
        assert!(recon.max_abs_diff(&a) < 1e-14);
    }

    #[test]
    fn random_matrices() {
        for n in 1..=12 {
            for seed in 0..5 {
                check(&lcg_matrix(n, seed * 31 + n as u64));
            }
        }
    }

    #[test]
    fn structured_matrices() {
        check(&Mat::identity(4));
        check(&Mat::zeros(3, 3));
        // nilpotent shift
        check(&Mat::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]));
        // real rotation: eigenvalues ±i
        let r = Mat::from_real_rows(&[[0.0, -1.0], [1.0, 0.0]]);
        check(&r);
        let mut ev = schur(&r).unwrap().eigenvalues();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - C64::new(0.0, 1.0)).norm() < 1e-14);
        // cyclic permutation: all roots of unity
        let mut p = Mat::zeros(5, 5);
        for i in 0..5 {
            p[((i + 1) % 5, i)] = C64::new(1.0, 0.0);
        }
        check(&p);
        for l in schur(&p).unwrap().eigenvalues() {
            assert!((l.powu(5) - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn non_square_is_input_error() {
        assert!(matches!(schur(&Mat::zeros(2, 3)), Err(Error::Input(_))));
    }
}
