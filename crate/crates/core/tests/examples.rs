//! Worked examples checked against independent reference computations:
//! exact integer arithmetic for the 2×2 cases, planted eigendecompositions
//! for the random ones.

use coeig::lie::{iteration_count, IndependenceTracker};
use coeig::linalg::decomp::{inverse, right_svd};
use coeig::linalg::{kernel, stacked_kernel, vec_norm};
use coeig::oracle::{gaussian_matrix, haar_unitary};
use coeig::{
    brute_force_common_eigenvector, common_eigenvector, generate_lie_algebra, is_simultaneously_triangulable,
    make_instance, remove_linearly_dependent, shemesh_subspace, simultaneous_triangulation, InstanceKind,
    InstanceSpec, Mat, Strategy, Tolerances, C64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Int2 = [[i64; 2]; 2];

const E: Int2 = [[0, 1], [0, 0]];
const F: Int2 = [[0, 0], [1, 0]];
const H: Int2 = [[1, 0], [0, -1]];

fn imul(a: Int2, b: Int2) -> Int2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn ibracket(a: Int2, b: Int2) -> Int2 {
    let (x, y) = (imul(a, b), imul(b, a));
    [[x[0][0] - y[0][0], x[0][1] - y[0][1]], [x[1][0] - y[1][0], x[1][1] - y[1][1]]]
}

fn flat(a: Int2) -> [i64; 4] {
    [a[0][0], a[0][1], a[1][0], a[1][1]]
}

/// Exact rank of integer row vectors by fraction-free elimination.
fn int_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for j in 0..cols {
                    m[r][j] = m[r][j] * a - m[rank][j] * b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// All-pairs closure in exact arithmetic.
fn exact_closure(gens: &[Int2]) -> usize {
    let mut basis: Vec<Int2> = Vec::new();
    for &g in gens {
        let mut rows: Vec<Vec<i64>> = basis.iter().map(|b| flat(*b).to_vec()).collect();
        rows.push(flat(g).to_vec());
        if int_rank(&rows) > basis.len() {
            basis.push(g);
        }
    }
    loop {
        let mut grew = false;
        'pairs: for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let c = ibracket(basis[i], basis[j]);
                let mut rows: Vec<Vec<i64>> = basis.iter().map(|b| flat(*b).to_vec()).collect();
                rows.push(flat(c).to_vec());
                if int_rank(&rows) > basis.len() {
                    basis.push(c);
                    grew = true;
                    break 'pairs;
                }
            }
        }
        if !grew {
            return basis.len();
        }
    }
}

fn to_mat(a: Int2) -> Mat {
    Mat::from_real_rows(&[[a[0][0] as f64, a[0][1] as f64], [a[1][0] as f64, a[1][1] as f64]])
}

fn e(i: usize, n: usize) -> Vec<C64> {
    (0..n).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()
}

fn parallel_to(v: &[C64], w: &[C64]) -> f64 {
    let ip: C64 = v.iter().zip(w).map(|(a, b)| a.conj() * b).sum();
    ip.norm() / (vec_norm(v) * vec_norm(w))
}

#[test]
fn kernel_of_nilpotent_block() {
    let tol = Tolerances::default();
    let m = Mat::from_real_rows(&[[0.0, -1.0], [0.0, 0.0]]);
    // m·e₁ = 0 and m·e₂ = −e₁ ≠ 0, so the kernel is span{e₁}
    assert_eq!(m.mul_vec(&e(0, 2)), vec![C64::new(0.0, 0.0); 2]);
    let k = kernel(&m, &tol).unwrap();
    assert_eq!(k.dim(), 1);
    assert!(parallel_to(&k.basis().col(0), &e(0, 2)) > 1.0 - 1e-14);
    let s = stacked_kernel(&[m], 2, &tol).unwrap();
    assert_eq!(s.dim(), 1);
    assert!(parallel_to(&s.basis().col(0), &e(0, 2)) > 1.0 - 1e-14);
}

#[test]
fn sl2_closure_matches_exact_arithmetic() {
    assert_eq!(exact_closure(&[E, F]), 3);
    assert_eq!(flat(ibracket(E, F)), flat(H));
    let tol = Tolerances::default();
    for s in [Strategy::AllPairs, Strategy::NewAgainstGenerators] {
        let b = generate_lie_algebra(&[to_mat(E), to_mat(F)], &tol, s).unwrap();
        assert_eq!(b.dim(), 3);
        assert!(b.distance_from_span(&to_mat(H)) < 1e-14);
    }
}

#[test]
fn sl2_queue_trace() {
    // E, F enter as generators; F is bracketed with E giving H; H is bracketed
    // with E and F, both landing in the span: three brackets in total
    let tol = Tolerances::default();
    let b = generate_lie_algebra(&[to_mat(E), to_mat(F)], &tol, Strategy::NewAgainstGenerators).unwrap();
    let stats = iteration_count(&b);
    assert_eq!(stats.commutators_computed, 3);
    assert!(stats.commutators_computed <= 3 * 2);
    assert_eq!(stats.elements_accepted, 1);
}

#[test]
fn sl2_shemesh_is_trivial() {
    // [E,F] = H, [E,H] = −2E, [F,H] = 2F; H alone is injective
    assert_eq!(flat(ibracket(E, H)), [0, -2, 0, 0]);
    assert_eq!(flat(ibracket(F, H)), [0, 0, 2, 0]);
    assert_eq!(H[0][0] * H[1][1] - H[0][1] * H[1][0], -1);
    let t = shemesh_subspace(&[to_mat(E), to_mat(F), to_mat(H)], &Tolerances::default()).unwrap();
    assert_eq!(t.dim(), 0);
}

#[test]
fn sl2_has_no_common_eigenvector() {
    // both spectra are {0}; ker E = span{e₁}, ker F = span{e₂}
    let tol = Tolerances::default();
    assert_eq!(imul(E, E), [[0; 2]; 2]);
    assert_eq!(imul(F, F), [[0; 2]; 2]);
    let ms = [to_mat(E), to_mat(F)];
    assert_eq!(ms[0].mul_vec(&e(0, 2)), vec![C64::new(0.0, 0.0); 2]);
    assert_ne!(ms[0].mul_vec(&e(1, 2)), vec![C64::new(0.0, 0.0); 2]);
    assert_ne!(ms[1].mul_vec(&e(0, 2)), vec![C64::new(0.0, 0.0); 2]);
    assert!(common_eigenvector(&ms, &tol).unwrap().is_none());
    assert!(brute_force_common_eigenvector(&ms, &tol).unwrap().is_empty());
    assert!(simultaneous_triangulation(&ms, &tol).unwrap().is_none());
    assert!(!is_simultaneously_triangulable(&ms, &tol).unwrap());
}

#[test]
fn upper_pair_shares_e1() {
    let tol = Tolerances::default();
    let a: Int2 = [[1, 0], [0, 2]];
    let b: Int2 = [[1, 1], [0, 2]];
    assert_eq!(ibracket(a, b), [[0, -1], [0, 0]]);
    // a·e₁ = e₁, b·e₁ = e₁
    assert_eq!((a[0][0], a[1][0], b[0][0], b[1][0]), (1, 0, 1, 0));
    let ms = [to_mat(a), to_mat(b)];
    let t = shemesh_subspace(&ms, &tol).unwrap();
    assert_eq!(t.dim(), 1);
    assert!(parallel_to(&t.basis().col(0), &e(0, 2)) > 1.0 - 1e-14);
    let r = common_eigenvector(&ms, &tol).unwrap().unwrap();
    assert!(parallel_to(r.vector(), &e(0, 2)) > 1.0 - 1e-12);
    for l in r.eigenvalues() {
        assert!((l - C64::new(1.0, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn matrix_and_its_square() {
    let tol = Tolerances::default();
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d: Vec<C64> = (0..4).map(|i| C64::new(i as f64 + 1.0, 0.5 * i as f64)).collect();
        let s = gaussian_matrix(4, 4, &mut rng);
        let a = s.matmul(&Mat::diag(&d)).matmul(&inverse(&s).unwrap());
        let a2 = a.matmul(&a);
        let r = common_eigenvector(&[a.clone(), a2], &tol).unwrap().unwrap();
        let j = (0..4)
            .max_by(|&x, &y| parallel_to(r.vector(), &s.col(x)).total_cmp(&parallel_to(r.vector(), &s.col(y))))
            .unwrap();
        assert!(parallel_to(r.vector(), &s.col(j)) > 1.0 - 1e-8, "seed {seed}");
        assert!((r.eigenvalues()[0] - d[j]).norm() < 1e-8 * a.fro_norm());
        assert!((r.eigenvalues()[1] - d[j] * d[j]).norm() < 1e-8 * a.fro_norm().powi(2));
    }
}

#[test]
fn conjugated_pair_matches_oracle() {
    let tol = Tolerances::default();
    for seed in 0..10 {
        let ms = make_instance(&InstanceSpec::new(InstanceKind::TriangulableConjugated, 4, 2, seed)).unwrap();
        let r = common_eigenvector(&ms, &tol).unwrap().unwrap();
        assert!(r.max_residual() <= 1e-8);
        let oracle = brute_force_common_eigenvector(&ms, &tol).unwrap();
        assert!(oracle.iter().any(|o| o
            .eigenvalues()
            .iter()
            .zip(r.eigenvalues())
            .all(|(x, y)| (x - y).norm() <= 1e-6)));
    }
}

#[test]
fn conjugated_triple_triangulates() {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = haar_unitary(6, &mut rng);
    let ts: Vec<Mat> = (0..3)
        .map(|_| {
            let g = gaussian_matrix(6, 6, &mut rng);
            Mat::from_fn(6, 6, |i, j| if i <= j { g[(i, j)] } else { C64::new(0.0, 0.0) })
        })
        .collect();
    let ms: Vec<Mat> = ts.iter().map(|t| u.adjoint().matmul(t).matmul(&u)).collect();
    let r = simultaneous_triangulation(&ms, &tol).unwrap().unwrap();
    for (t, a) in r.triangs().iter().zip(&ms) {
        assert!(t.strictly_lower_norm() <= 1e-8 * a.fro_norm());
    }
    let spec = InstanceSpec::new(InstanceKind::TriangulableConjugated, 4, 3, 21);
    assert!(is_simultaneously_triangulable(&make_instance(&spec).unwrap(), &tol).unwrap());
}

#[test]
fn dependent_sum_is_removed() {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = gaussian_matrix(3, 3, &mut rng);
    let b = gaussian_matrix(3, 3, &mut rng);
    let sum = &a + &b;
    // reference rank: singular values of the 3×9 stack of vectorized inputs
    let stack = Mat::from_fn(3, 9, |i, j| [&a, &b, &sum][i].as_slice()[j]);
    let sv = right_svd(&stack).unwrap().singular_values;
    assert!(sv[1] > 1e-3 * sv[0] && sv[2] < 1e-12 * sv[0]);
    let kept = remove_linearly_dependent(&[a.clone(), b.clone(), sum], &tol).unwrap();
    assert_eq!(kept, vec![a, b]);
}

#[test]
fn tracker_small_sequence() {
    let tol = Tolerances::default();
    let mut t = IndependenceTracker::new(3).unwrap();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    assert!(!t.try_add(&[zero, zero, zero], &tol).unwrap());
    assert!(t.try_add(&[one, zero, zero], &tol).unwrap());
    assert!(t.try_add(&[zero, one, zero], &tol).unwrap());
    assert!(!t.try_add(&[one, one, zero], &tol).unwrap());
    assert!(t.try_add(&[one, one, one], &tol).unwrap());
    assert_eq!(t.kept(), 3);
}
