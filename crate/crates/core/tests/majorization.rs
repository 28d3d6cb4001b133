mod common;

use common::subsets;
use eub_core::entropy::{majorizes, WeightVector};
use eub_core::majorants::{sk_profile, PairMajorants, SearchOptions};
use eub_core::matrix::{haar_random_unitary, UnitaryMatrix};
use eub_core::statelab::random_pure_state;
use nalgebra::DMatrix;

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn assert_majorizes(a: &WeightVector, b: &WeightVector, what: &str) {
    assert!(
        majorizes(a, b).unwrap(),
        "{what}: {:?} vs {:?}",
        a.entries(),
        b.entries()
    );
}

/// Largest singular value by power iteration on `M^dagger M`.
fn top_singular_value(m: &DMatrix<nalgebra::Complex<f64>>) -> f64 {
    let g = m.adjoint() * m;
    let n = g.ncols();
    let mut v = nalgebra::DVector::from_fn(n, |i, _| nalgebra::Complex::new(1.0 + i as f64 * 0.37, 0.1 * i as f64));
    let mut lambda = 0.0;
    for _ in 0..2000 {
        let w = &g * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = w.unscale(norm);
        let done = (norm - lambda).abs() < 1e-15 * norm.max(1.0);
        lambda = norm;
        v = next;
        if done {
            break;
        }
    }
    lambda.sqrt()
}

fn brute_force_sk(u: &UnitaryMatrix) -> Vec<f64> {
    let d = u.dim();
    let m = u.matrix().as_nalgebra();
    (1..=d)
        .map(|k| {
            let mut best: f64 = 0.0;
            for rows in 1..=k.min(d) {
                let cols = k + 1 - rows;
                if cols == 0 || cols > d {
                    continue;
                }
                for r in subsets(d, rows) {
                    for c in subsets(d, cols) {
                        let sub = DMatrix::from_fn(rows, cols, |i, j| m[(r[i], c[j])]);
                        best = best.max(top_singular_value(&sub));
                    }
                }
            }
            best
        })
        .collect()
}

#[test]
fn exhaustive_search_matches_brute_force() {
    for seed in 0..30 {
        let u = haar_random_unitary(3, 7000 + seed).unwrap();
        let fast = sk_profile(&u, &opts()).unwrap();
        let slow = brute_force_sk(&u);
        for (a, b) in fast.values().iter().zip(&slow) {
            assert!((a - b).abs() < 1e-10, "seed {seed}: {:?} vs {slow:?}", fast.values());
        }
    }
}

#[test]
fn majorization_suite_on_random_unitaries() {
    for d in 2..=4 {
        for seed in 0..200 {
            let u = haar_random_unitary(d, 10_000 * d as u64 + seed).unwrap();
            let m = PairMajorants::compute(&u, &opts()).unwrap();
            let tag = format!("d={d} seed={seed}");

            assert_majorizes(&m.q0.weights, &m.q1.weights, &format!("Q0>Q1 {tag}"));
            assert_majorizes(&m.q1.weights, &m.qd.weights, &format!("Q1>Qd {tag}"));
            assert_majorizes(&m.qd.weights, &m.w.weights, &format!("Qd>W {tag}"));
            assert_majorizes(&m.w1.weights, &m.w2.weights, &format!("W1>W2 {tag}"));
            assert_majorizes(&m.w2.weights, &m.w.weights, &format!("W2>W {tag}"));

            let s = m.profile.values();
            let (c1, c2) = (m.overlap.c1(), m.overlap.c2());
            assert!(s[1] <= (c1 + c2).sqrt() + 1e-10, "s2 {tag}");
            for k in 1..d {
                assert!(s[k] - s[k - 1] <= s[0] + 1e-10, "increment {tag}");
            }

            let psi = random_pure_state(d, seed).unwrap();
            let p = psi.probabilities(&UnitaryMatrix::identity(d)).unwrap();
            let q = psi.probabilities(&u).unwrap();
            assert_majorizes(&m.qd.weights, &p.tensor(&q), &format!("Qd>p(x)q {tag}"));
            let one_w = WeightVector::clamped(vec![1.0]).direct_sum(&m.w.weights);
            assert_majorizes(&one_w, &p.direct_sum(&q), &format!("1+W>p+q {tag}"));
        }
    }
}
