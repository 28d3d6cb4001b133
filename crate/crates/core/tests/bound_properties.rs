mod common;

use common::random_gauge;
use eub_core::bounds::{compute_report, pair_bounds, BoundId, ReportOptions};
use eub_core::families::{build_family, grid, FamilyId, FamilySpec};
use eub_core::majorants::{PairMajorants, SearchOptions};
use eub_core::matrix::haar_random_unitary;
use eub_core::statelab::{random_mixed_state, validity_margins, von_neumann_entropy, MeasurementSet, ValidityOptions};

fn pair_report(u: &eub_core::UnitaryMatrix) -> std::collections::BTreeMap<BoundId, f64> {
    let m = PairMajorants::compute(u, &SearchOptions::default()).unwrap();
    pair_bounds(u, &m, &ReportOptions::default()).unwrap().0
}

#[test]
fn dominance_chain() {
    for d in 2..=5 {
        for seed in 0..60 {
            let u = haar_random_unitary(d, 500 * d as u64 + seed).unwrap();
            let b = pair_report(&u);
            let tag = format!("d={d} seed={seed}");
            assert!(b[&BoundId::MU] >= b[&BoundId::D] - 1e-12, "{tag}");
            assert!(b[&BoundId::CP1] >= b[&BoundId::MU] - 1e-12, "{tag}");
            assert!(b[&BoundId::CP2] >= b[&BoundId::CP1] - 1e-9, "{tag}");
            assert!(b[&BoundId::Maj2] >= b[&BoundId::Maj1] - 1e-9, "{tag}");
            assert!(b[&BoundId::RPZ1] >= b[&BoundId::MU] - 1e-9, "{tag}");
        }
    }
}

#[test]
fn bounds_are_gauge_invariant() {
    for d in 2..=4 {
        for seed in 0..25 {
            let u = haar_random_unitary(d, 900 + seed).unwrap();
            let base = pair_report(&u);
            let moved = pair_report(&random_gauge(&u, seed));
            for (id, v) in &base {
                assert!(
                    (v - moved[id]).abs() < 1e-9,
                    "{id} d={d} seed={seed}: {v} vs {}",
                    moved[id]
                );
            }
        }
    }
}

#[test]
fn rpz_values_shift_by_state_entropy() {
    let u = haar_random_unitary(3, 11).unwrap();
    let ms = MeasurementSet::pair(u);
    let base = compute_report(&ms, &ReportOptions::default()).unwrap();
    let s = von_neumann_entropy(&random_mixed_state(3, 4).unwrap()).unwrap();
    let shifted = compute_report(
        &ms,
        &ReportOptions {
            state_entropy: s,
            ..Default::default()
        },
    )
    .unwrap();
    for id in BoundId::ALL {
        let expected = if id.adds_state_entropy() { s } else { 0.0 };
        assert!(
            (shifted.get(id).unwrap() - base.get(id).unwrap() - expected).abs() < 1e-12,
            "{id}"
        );
    }
}

#[test]
fn multi_beats_pairwise_combination_on_families() {
    for id in [FamilyId::Qubit3Theta, FamilyId::Qutrit4Theta] {
        let (lo, hi) = id.default_range();
        for p in grid(lo, hi, 21).unwrap() {
            let ms = build_family(&FamilySpec::new(id, p).unwrap()).unwrap();
            let r = compute_report(&ms, &ReportOptions::default()).unwrap();
            let multi = r.get(BoundId::Multi).unwrap();
            let maj2 = r.get(BoundId::Maj2).unwrap();
            assert!(multi >= maj2 - 1e-9, "{id} at {p}: {multi} < {maj2}");
        }
    }
}

#[test]
fn reports_are_valid_on_random_unitaries() {
    for d in 2..=4 {
        for seed in 0..10 {
            let ms = MeasurementSet::pair(haar_random_unitary(d, 3000 + seed).unwrap());
            let r = compute_report(&ms, &ReportOptions::default()).unwrap();
            let (ids, checks): (Vec<_>, Vec<_>) = r.checks().into_iter().unzip();
            let margins = validity_margins(&ms, &checks, &ValidityOptions::new(300, seed)).unwrap();
            for (id, m) in ids.iter().zip(margins) {
                assert!(m >= -1e-9, "{id} d={d} seed={seed}: {m}");
            }
        }
    }
}

#[test]
fn combined_reports_are_valid_for_mixed_states() {
    for id in [FamilyId::Qubit3Theta, FamilyId::Qutrit4Theta] {
        let ms = build_family(&FamilySpec::new(id, 0.3).unwrap()).unwrap();
        let r = compute_report(&ms, &ReportOptions::default()).unwrap();
        let (ids, checks): (Vec<_>, Vec<_>) = r.checks().into_iter().unzip();
        let margins = validity_margins(&ms, &checks, &ValidityOptions::new(400, 5)).unwrap();
        for (b, m) in ids.iter().zip(margins) {
            assert!(m >= -1e-9, "{id} {b}: {m}");
        }
    }
}
