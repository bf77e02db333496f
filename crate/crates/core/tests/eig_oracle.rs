//! Dense and tridiagonal eigensolvers checked against independent oracles:
//! a cyclic Jacobi rotation solver and an LU determinant.

use nalgebra::DMatrix;
use nearfermi_core::eig::{symmetric_eigs, tridiag_eigs, SymmetricMatrix};
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

/// Cyclic Jacobi eigenvalue oracle (values only, ascending).
fn jacobi_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut m = a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        if off.sqrt() < 1e-15 * m.norm() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut v: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Determinant by Gaussian elimination with partial pivoting.
fn lu_determinant(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut m = a.clone();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].abs().total_cmp(&m[(j, col)].abs()))
            .unwrap();
        if m[(pivot, col)] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap_rows(pivot, col);
            det = -det;
        }
        det *= m[(col, col)];
        for r in (col + 1)..n {
            let f = m[(r, col)] / m[(col, col)];
            for c in col..n {
                m[(r, c)] -= f * m[(col, c)];
            }
        }
    }
    det
}

fn random_symmetric(rng: &mut StdRng, n: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let x = rng.gen_range(-1.0..1.0);
            a[(i, j)] = x;
            a[(j, i)] = x;
        }
    }
    a
}

#[test]
fn dense_matches_jacobi_oracle_50x50() {
    let mut rng = StdRng::seed_from_u64(7);
    let a = random_symmetric(&mut rng, 50);
    let oracle = jacobi_eigenvalues(&a);
    let eig = symmetric_eigs(&SymmetricMatrix::new(a).unwrap(), false).unwrap();
    for (x, y) in eig.values.iter().zip(&oracle) {
        assert!((x - y).abs() < 1e-10, "{x} vs {y}");
    }
}

#[test]
fn residuals_and_orthogonality() {
    let mut rng = StdRng::seed_from_u64(11);
    for &n in &[1usize, 2, 3, 10, 40] {
        let a = random_symmetric(&mut rng, n);
        let norm = a.norm();
        let eig = symmetric_eigs(&SymmetricMatrix::new(a.clone()).unwrap(), true).unwrap();
        let v = eig.vectors.unwrap();
        for k in 0..n {
            let col = v.column(k);
            let r = &a * col - col * eig.values[k];
            assert!(r.norm() <= 1e-10 * norm.max(1.0), "n={n} k={k}");
        }
        let gram = v.transpose() * &v - DMatrix::identity(n, n);
        assert!(gram.amax() <= 1e-10);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn tridiagonal_matches_dense_7x7() {
    let mut rng = StdRng::seed_from_u64(3);
    let d: Vec<f64> = (0..7).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let e: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let tri = tridiag_eigs(&d, &e).unwrap();
    let dense = symmetric_eigs(&SymmetricMatrix::from_tridiagonal(&d, &e).unwrap(), false).unwrap();
    for (x, y) in tri.iter().zip(&dense.values) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn handles_graded_and_degenerate_spectra() {
    // Strongly graded diagonal plus repeated eigenvalues.
    let d = [1e-8, 1.0, 1.0, 1e6, 1.0];
    let e = [0.0, 0.0, 1e-3, 0.0];
    let tri = tridiag_eigs(&d, &e).unwrap();
    let oracle = jacobi_eigenvalues(SymmetricMatrix::from_tridiagonal(&d, &e).unwrap().entries());
    for (x, y) in tri.iter().zip(&oracle) {
        assert!((x - y).abs() <= 1e-12 * 1e6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_and_determinant_sign(seed in any::<u64>(), n in 1usize..=20) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_symmetric(&mut rng, n);
        let trace = a.trace();
        let det = lu_determinant(&a);
        let eig = symmetric_eigs(&SymmetricMatrix::new(a.clone()).unwrap(), false).unwrap();
        let sum: f64 = eig.values.iter().sum();
        let scale = a.abs().sum().max(1.0);
        prop_assert!((sum - trace).abs() <= 1e-11 * scale);
        let prod: f64 = eig.values.iter().product();
        if det.abs() > 1e-8 {
            prop_assert_eq!(prod.signum(), det.signum());
        }
    }

    #[test]
    fn permutation_invariance(seed in any::<u64>(), n in 2usize..=15) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_symmetric(&mut rng, n);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let b = DMatrix::from_fn(n, n, |i, j| a[(perm[i], perm[j])]);
        let ea = symmetric_eigs(&SymmetricMatrix::new(a).unwrap(), false).unwrap();
        let eb = symmetric_eigs(&SymmetricMatrix::new(b).unwrap(), false).unwrap();
        for (x, y) in ea.values.iter().zip(&eb.values) {
            prop_assert!((x - y).abs() <= 1e-12 * (n as f64));
        }
    }
}
