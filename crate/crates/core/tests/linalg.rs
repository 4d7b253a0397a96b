use bkm::linalg::{condition_estimate_1norm, is_symmetric, lu_solve, DenseMatrix};
use bkm::BkmError;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random orthogonal matrix as a product of Householder reflections.
fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let mut q = DenseMatrix::identity(n);
    for _ in 0..n {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let mut h = DenseMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] -= 2.0 * v[i] * v[j] / vv;
            }
        }
        q = h.mul(&q);
    }
    q
}

/// `U diag(s) V^T` together with its exact inverse `V diag(1/s) U^T`.
fn with_singular_values(s: &[f64], rng: &mut ChaCha8Rng) -> (DenseMatrix, DenseMatrix) {
    let n = s.len();
    let u = random_orthogonal(n, rng);
    let v = random_orthogonal(n, rng);
    let inv_s: Vec<f64> = s.iter().map(|x| 1.0 / x).collect();
    let a = u.mul(&DenseMatrix::from_diagonal(s)).mul(&v.transpose());
    let inv = v
        .mul(&DenseMatrix::from_diagonal(&inv_s))
        .mul(&u.transpose());
    (a, inv)
}

fn log_spaced(n: usize, kappa: f64) -> Vec<f64> {
    (0..n)
        .map(|i| kappa.powf(-(i as f64) / (n - 1) as f64))
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn small_hand_checked_systems() {
    let x = lu_solve(&DenseMatrix::identity(3), &[1.0, 2.0, 3.0]).unwrap();
    assert_eq!(x, vec![1.0, 2.0, 3.0]);
    let a = DenseMatrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
    let x = lu_solve(&a, &[3.0, 5.0]).unwrap();
    assert!(max_abs_diff(&x, &[0.8, 1.4]) < 1e-15);
    let a = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
    assert!(matches!(
        lu_solve(&a, &[1.0, 1.0]),
        Err(BkmError::SingularMatrix { .. })
    ));
}

#[test]
fn symmetry_checks() {
    assert!(is_symmetric(&DenseMatrix::identity(2), 0.0).unwrap());
    let a = DenseMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
    assert!(!is_symmetric(&a, 1e-12).unwrap());
    assert!(is_symmetric(&DenseMatrix::zeros(2, 3), 1.0).is_err());
}

#[test]
fn condition_estimates() {
    let k = condition_estimate_1norm(&DenseMatrix::identity(5)).unwrap();
    assert!((0.1..=10.0).contains(&k));
    let k = condition_estimate_1norm(&DenseMatrix::from_diagonal(&[1.0, 1e6])).unwrap();
    assert!((1e5..=1e7).contains(&k));

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let (a, inv) = with_singular_values(&log_spaced(10, 1e4), &mut rng);
        let exact = a.norm_1() * inv.norm_1();
        let estimate = condition_estimate_1norm(&a).unwrap();
        assert!(
            estimate <= 10.0 * exact && estimate >= exact / 10.0,
            "{estimate} vs {exact}"
        );
    }
    let singular = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
    assert!(condition_estimate_1norm(&singular).is_err());
}

#[test]
fn recovers_known_solutions_up_to_kappa_1e6() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for kappa in [1.0, 1e2, 1e4, 1e6] {
        for n in [2, 10, 25] {
            let (a, _) = with_singular_values(&log_spaced(n, kappa), &mut rng);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let b = a.mul_vec(&x);
            let got = lu_solve(&a, &b).unwrap();
            assert!(max_abs_diff(&got, &x) <= 1e-9, "kappa {kappa}, n {n}");
        }
    }
}

#[test]
fn transpose_solve_agrees_with_explicit_transpose() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (a, _) = with_singular_values(&log_spaced(12, 1e3), &mut rng);
    let b: Vec<f64> = (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let via_factors = a.lu().unwrap().solve_transpose(&b).unwrap();
    let direct = lu_solve(&a.transpose(), &b).unwrap();
    assert!(max_abs_diff(&via_factors, &direct) < 1e-10);
}

fn matrix_and_solution() -> impl Strategy<Value = (DenseMatrix, Vec<f64>)> {
    (1usize..=50).prop_flat_map(|n| {
        (
            prop::collection::vec(-1.0f64..1.0, n * n),
            prop::collection::vec(-10.0f64..10.0, n),
        )
            .prop_map(move |(mut entries, x)| {
                // diagonal dominance keeps the condition number small
                for i in 0..n {
                    entries[i * n + i] +=
                        n as f64 * if entries[i * n + i] < 0.0 { -1.0 } else { 1.0 };
                }
                (DenseMatrix::from_row_major(n, n, entries).unwrap(), x)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residual_is_small_for_well_conditioned_systems((a, x) in matrix_and_solution()) {
        let b = a.mul_vec(&x);
        let got = lu_solve(&a, &b).unwrap();
        let residual = max_abs_diff(&a.mul_vec(&got), &b);
        let b_norm = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(residual <= 1e-8 * (1.0 + b_norm));
        let kappa = condition_estimate_1norm(&a).unwrap();
        let x_norm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(max_abs_diff(&got, &x) <= 1e-8 * kappa * x_norm.max(1.0));
    }

    #[test]
    fn transpose_is_an_involution((a, _) in matrix_and_solution()) {
        prop_assert_eq!(a.transpose().transpose(), a);
    }
}
