use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eub_core::bounds::{compute_report, ReportOptions};
use eub_core::families::{build_family, sweep, FamilyId, FamilySpec, SweepOptions};
use eub_core::majorants::{multi_profile, sk_profile, SearchOptions};
use eub_core::matrix::haar_random_unitary;
use eub_core::statelab::{validity_margins, MeasurementSet, ValidityOptions};
use eub_core::ExecMode;

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("sk_profile_d6");
    let u = haar_random_unitary(6, 1).unwrap();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sk_profile(black_box(&u), &SearchOptions::with_exec(exec)).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("multi_profile_qutrit4");
    let ms = build_family(&FamilySpec::new(FamilyId::Qutrit4Theta, 0.5).unwrap()).unwrap();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| multi_profile(black_box(ms.unitaries()), &SearchOptions::with_exec(exec)).unwrap())
        });
    }
    group.finish();
}

fn validity(c: &mut Criterion) {
    let mut group = c.benchmark_group("validity_d4_1000");
    let ms = MeasurementSet::pair(haar_random_unitary(4, 2).unwrap());
    let report = compute_report(&ms, &ReportOptions::default()).unwrap();
    let checks: Vec<_> = report.checks().into_iter().map(|(_, c)| c).collect();
    for (name, exec) in MODES {
        let opts = ValidityOptions {
            exec,
            ..ValidityOptions::new(1000, 7)
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| validity_margins(black_box(&ms), &checks, &opts).unwrap())
        });
    }
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep_f4_power_21");
    group.sample_size(20);
    for (name, exec) in MODES {
        let mut opts = SweepOptions {
            exec,
            ..Default::default()
        };
        opts.report.search.exec = exec;
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep(FamilyId::F4Power, 0.0, 1.0, 21, black_box(&opts)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, search, validity, sweeps);
criterion_main!(benches);
