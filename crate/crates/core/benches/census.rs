//! Sequential against rayon enumeration. Build with `--no-default-features`
//! to compile the parallel path out entirely.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pvsft_core::census::{full_census, oracle_ft_matrix, CensusConfig};
use pvsft_core::exec::ExecConfig;
use pvsft_core::ftsolver::{solve_ft_matrix, Provider};
use pvsft_core::reps::{RepKind, Space};

fn schedules() -> [(&'static str, CensusConfig); 2] {
    [
        ("sequential", CensusConfig::sequential()),
        (
            "parallel",
            CensusConfig {
                exec: ExecConfig::default(),
                ..Default::default()
            },
        ),
    ]
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_census");
    group.sample_size(10);
    for (kind, p) in [(RepKind::Sym23, 7), (RepKind::Pair22, 7), (RepKind::Pair23, 3)] {
        let space = Space::new(kind, p).unwrap();
        for (name, cfg) in schedules() {
            group.bench_with_input(BenchmarkId::new(name, format!("{kind}/{p}")), &space, |b, s| {
                b.iter(|| full_census(s, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_ft_matrix");
    group.sample_size(10);
    for (kind, p) in [(RepKind::Sym32, 7), (RepKind::Pair23, 3)] {
        let space = Space::new(kind, p).unwrap();
        for (name, cfg) in schedules() {
            group.bench_with_input(BenchmarkId::new(name, format!("{kind}/{p}")), &space, |b, s| {
                b.iter(|| oracle_ft_matrix(s, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn enumerated_counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_enumerated_counts");
    group.sample_size(10);
    for (name, cfg) in schedules() {
        group.bench_function(BenchmarkId::new(name, "2sym2-3/3"), |b| {
            b.iter(|| solve_ft_matrix(RepKind::Pair23, 3, &Provider::Enumeration(cfg.clone())).unwrap())
        });
    }
    group.bench_function("closed_form/2sym2-3/13", |b| {
        b.iter(|| solve_ft_matrix(RepKind::Pair23, 13, &Provider::Formula).unwrap())
    });
    group.finish();
}

criterion_group!(benches, census, oracle, enumerated_counts);
criterion_main!(benches);
