mod common;

use common::random_phases;
use eub_core::bounds::{compute_report, BoundId, ReportOptions};
use eub_core::entropy::{shannon_entropy, EntropyOrder};
use eub_core::families::o3;
use eub_core::matrix::haar_random_unitary;
use eub_core::statelab::{
    entropy_sum, measurement_probabilities, optimal_bound_numeric, random_mixed_state, random_pure_state,
    von_neumann_entropy, DensityMatrix, MeasurementSet,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn entropy_sum_ignores_column_phases() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for seed in 0..20 {
        let us: Vec<_> = (0..3)
            .map(|i| haar_random_unitary(3, 100 * seed + i).unwrap())
            .collect();
        let rephased: Vec<_> = us
            .iter()
            .map(|u| u.compose(&random_phases(3, &mut rng)).unwrap())
            .collect();
        let a = MeasurementSet::new(us).unwrap();
        let b = MeasurementSet::new(rephased).unwrap();
        let rho = if seed % 2 == 0 {
            DensityMatrix::from_pure(&random_pure_state(3, seed).unwrap())
        } else {
            random_mixed_state(3, seed).unwrap()
        };
        for alpha in [0.5, 1.0, 2.0] {
            let order = EntropyOrder::new(alpha).unwrap();
            let x = entropy_sum(&rho, &a, order).unwrap();
            let y = entropy_sum(&rho, &b, order).unwrap();
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn measurement_never_lowers_entropy() {
    for seed in 0..200 {
        let d = 2 + (seed as usize % 4);
        let rho = random_mixed_state(d, seed).unwrap();
        let u = haar_random_unitary(d, seed + 1).unwrap();
        let p = measurement_probabilities(&rho, &u).unwrap();
        assert!(von_neumann_entropy(&rho).unwrap() <= shannon_entropy(&p) + 1e-9);
    }
}

#[test]
fn numeric_optimum_sits_above_every_bound() {
    let mut cases = vec![MeasurementSet::pair(o3())];
    for seed in 0..4 {
        cases.push(MeasurementSet::pair(haar_random_unitary(3, 40 + seed).unwrap()));
    }
    for ms in cases {
        let opt = optimal_bound_numeric(&ms, 32, 1).unwrap();
        let r = compute_report(&ms, &ReportOptions::default()).unwrap();
        for id in BoundId::PAIRWISE.into_iter().chain([BoundId::Multi]) {
            let v = r.get(id).unwrap();
            assert!(opt >= v - 1e-6, "{id}: opt {opt} < {v}");
        }
    }
}
