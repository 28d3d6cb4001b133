mod common;

use eub_core::families::fourier_matrix;
use eub_core::matrix::{haar_random_unitary, operator_norm, unitary_fractional_power, ComplexMatrix, C64};
use proptest::prelude::*;

fn random_rect(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let u = haar_random_unitary(rows.max(cols) + 1, seed).unwrap();
    let r: Vec<usize> = (0..rows).collect();
    let c: Vec<usize> = (1..=cols).collect();
    u.matrix().submatrix(&r, &c).scale(C64::new(1.7, -0.4))
}

#[test]
fn haar_overlap_mean_at_d2() {
    let n = 10_000;
    let mean: f64 = (0..n)
        .map(|s| haar_random_unitary(2, s).unwrap().get(0, 0).norm_sqr())
        .sum::<f64>()
        / n as f64;
    assert!((mean - 0.5).abs() < 0.02, "{mean}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitaries_have_unit_norm(seed in any::<u64>(), d in 1usize..8) {
        let u = haar_random_unitary(d, seed).unwrap();
        prop_assert!((operator_norm(u.matrix()).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn norm_is_adjoint_invariant(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5) {
        let m = random_rect(rows, cols, seed);
        let a = operator_norm(&m).unwrap();
        let b = operator_norm(&m.adjoint()).unwrap();
        prop_assert!((a - b).abs() < 1e-12 * a.max(1.0));
    }

    #[test]
    fn fractional_powers_add(seed in any::<u64>(), a in 0.0f64..0.5, b in 0.0f64..0.5, d in 2usize..5) {
        let u = haar_random_unitary(d, seed).unwrap();
        let lhs = unitary_fractional_power(&u, a).unwrap().compose(&unitary_fractional_power(&u, b).unwrap()).unwrap();
        let rhs = unitary_fractional_power(&u, a + b).unwrap();
        prop_assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-9);
    }
}

#[test]
fn fourier_powers_add_on_a_grid() {
    for d in [3, 4] {
        let f = fourier_matrix(d).unwrap();
        for i in 0..=10 {
            for j in 0..=(10 - i) {
                let (a, b) = (i as f64 / 10.0, j as f64 / 10.0);
                let lhs = unitary_fractional_power(&f, a)
                    .unwrap()
                    .compose(&unitary_fractional_power(&f, b).unwrap())
                    .unwrap();
                let rhs = unitary_fractional_power(&f, a + b).unwrap();
                assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-9, "d={d} a={a} b={b}");
            }
        }
    }
}
