//! Dense factorizations: Householder QR, one-sided Jacobi SVD, LU inversion
//! and Gram-Schmidt orthonormalization.

use super::mat::{dot, vec_norm, Mat, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Complex Householder vector for `x`: returns `(u, alpha)` with
/// `(I - 2 u u^* / u^* u) x = alpha e_1`. `u` is `None` when `x` is zero.
pub fn householder_vector(x: &[C64]) -> (Option<Vec<C64>>, C64) {
    let norm = vec_norm(x);
    if norm == 0.0 {
        return (None, ZERO);
    }
    let x0 = x[0];
    let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
    let alpha = -phase * norm;
    let mut u = x.to_vec();
    u[0] -= alpha;
    (Some(u), alpha)
}

/// Apply `I - 2 u u^*/(u^* u)` from the left to rows `offset..offset+u.len()`
/// of `m`, restricted to columns `c0..`.
pub(crate) fn reflect_rows(m: &mut Mat, u: &[C64], offset: usize, c0: usize) {
    let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    if uu == 0.0 {
        return;
    }
    for j in c0..m.cols() {
        let mut s = ZERO;
        for (l, ul) in u.iter().enumerate() {
            s += ul.conj() * m[(offset + l, j)];
        }
        let s = s * (2.0 / uu);
        for (l, ul) in u.iter().enumerate() {
            m[(offset + l, j)] -= ul * s;
        }
    }
}

/// Apply `I - 2 u u^*/(u^* u)` from the right to columns `offset..` of `m`.
pub(crate) fn reflect_cols(m: &mut Mat, u: &[C64], offset: usize) {
    let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    if uu == 0.0 {
        return;
    }
    for i in 0..m.rows() {
        let mut s = ZERO;
        for (l, ul) in u.iter().enumerate() {
            s += m[(i, offset + l)] * ul;
        }
        let s = s * (2.0 / uu);
        for (l, ul) in u.iter().enumerate() {
            m[(i, offset + l)] -= s * ul.conj();
        }
    }
}

/// Thin Householder QR of an `m×n` matrix: `a = q · r` with `q` of shape
/// `m×p`, `r` of shape `p×n`, `p = min(m, n)`.
pub fn qr(a: &Mat) -> (Mat, Mat) {
    let (m, n) = (a.rows(), a.cols());
    let p = m.min(n);
    let mut r = a.clone();
    let mut reflectors: Vec<Option<Vec<C64>>> = Vec::with_capacity(p);
    for k in 0..p {
        let x: Vec<C64> = (k..m).map(|i| r[(i, k)]).collect();
        let (u, alpha) = householder_vector(&x);
        if let Some(u) = &u {
            reflect_rows(&mut r, u, k, k);
            r[(k, k)] = alpha;
            for i in k + 1..m {
                r[(i, k)] = ZERO;
            }
        }
        reflectors.push(u);
    }
    let mut q = Mat::zeros(m, p);
    for i in 0..p {
        q[(i, i)] = ONE;
    }
    for (k, u) in reflectors.iter().enumerate().rev() {
        if let Some(u) = u {
            reflect_rows(&mut q, u, k, 0);
        }
    }
    (q, r.submatrix(0, p, 0, n))
}

/// Singular values (descending) and the matching right singular vectors.
#[derive(Debug, Clone)]
pub struct RightSvd {
    pub singular_values: Vec<f64>,
    pub v: Mat,
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi SVD, returning `σ` and `V` with `A V = U Σ`.
///
/// Tall inputs are first compressed to their `R` factor, which has the same
/// singular values and right singular vectors.
pub fn right_svd(a: &Mat) -> Result<RightSvd> {
    let n = a.cols();
    let work = if a.rows() > n { qr(a).1 } else { a.clone() };
    let m = work.rows();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| work.col(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            e
        })
        .collect();
    let eps = f64::EPSILON * (m.max(n) as f64);
    // columns below this squared norm are rounding noise and left alone
    let negligible = (f64::EPSILON * work.fro_norm()).powi(2);

    let mut converged = n < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let pc = phase.conj();
                rotate(&mut cols, p, q, c, s, pc);
                rotate(&mut v, p, q, c, s, pc);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::numerical(
            "svd",
            format!("Jacobi SVD did not converge in {JACOBI_MAX_SWEEPS} sweeps"),
        ));
    }

    let mut order: Vec<(f64, usize)> = cols.iter().map(|c| vec_norm(c)).zip(0..).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let singular_values = order.iter().map(|&(s, _)| s).collect();
    let v_sorted: Vec<Vec<C64>> = order.iter().map(|&(_, j)| v[j].clone()).collect();
    Ok(RightSvd {
        singular_values,
        v: Mat::from_cols(n, &v_sorted),
    })
}

// [x_p, x_q] <- [c x_p - s conj(φ) x_q, s x_p + c conj(φ) x_q]
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, pc: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let a = *xp;
        let b = *xq * pc;
        *xp = a * c - b * s;
        *xq = a * s + b * c;
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Columns whose
/// remaining norm falls below `drop_rel` times their original norm are dropped.
pub fn orthonormalize_cols(cols: &[Vec<C64>], drop_rel: f64) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(cols.len());
    for c in cols {
        let orig = vec_norm(c);
        if orig == 0.0 {
            continue;
        }
        let mut w = c.clone();
        for _ in 0..2 {
            for q in &out {
                let h = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= qi * h;
                }
            }
        }
        let nrm = vec_norm(&w);
        if nrm <= drop_rel * orig {
            continue;
        }
        for wi in w.iter_mut() {
            *wi /= nrm;
        }
        out.push(w);
    }
    out
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn inverse(a: &Mat) -> Result<Mat> {
    if !a.is_square() {
        return Err(Error::Input("inverse of a non-square matrix".into()));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut inv = Mat::identity(n);
    let scale = a.max_abs();
    for k in 0..n {
        let (piv, pmax) = (k..n)
            .map(|i| (i, m[(i, k)].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pmax <= f64::EPSILON * scale * n as f64 {
            return Err(Error::numerical("inverse", "matrix is numerically singular"));
        }
        if piv != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(piv, j)];
                m[(piv, j)] = t;
                let t = inv[(k, j)];
                inv[(k, j)] = inv[(piv, j)];
                inv[(piv, j)] = t;
            }
        }
        let d = m[(k, k)].inv();
        for j in 0..n {
            m[(k, j)] *= d;
            inv[(k, j)] *= d;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[(i, k)];
            if f == ZERO {
                continue;
            }
            for j in 0..n {
                let mk = m[(k, j)];
                let ik = inv[(k, j)];
                m[(i, j)] -= f * mk;
                inv[(i, j)] -= f * ik;
            }
        }
    }
    Ok(inv)
}
