#![allow(dead_code)]

use eub_core::matrix::{ComplexMatrix, UnitaryMatrix, C64};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random diagonal phase matrix.
pub fn random_phases(d: usize, rng: &mut ChaCha8Rng) -> UnitaryMatrix {
    let diag: Vec<C64> = (0..d)
        .map(|_| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    UnitaryMatrix::new(ComplexMatrix::diagonal(&diag)).unwrap()
}

/// Random permutation matrix.
pub fn random_permutation(d: usize, rng: &mut ChaCha8Rng) -> UnitaryMatrix {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let entries = (0..d * d)
        .map(|idx| {
            if perm[idx / d] == idx % d {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    UnitaryMatrix::new(ComplexMatrix::from_row_major(d, d, entries).unwrap()).unwrap()
}

/// `D1 P1 U P2 D2` for random phases `D` and permutations `P`.
pub fn random_gauge(u: &UnitaryMatrix, seed: u64) -> UnitaryMatrix {
    let d = u.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let left = random_phases(d, &mut rng)
        .compose(&random_permutation(d, &mut rng))
        .unwrap();
    let right = random_permutation(d, &mut rng)
        .compose(&random_phases(d, &mut rng))
        .unwrap();
    left.compose(u).unwrap().compose(&right).unwrap()
}

/// All `k`-subsets of `0..n`, generated by recursion in colex order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}
