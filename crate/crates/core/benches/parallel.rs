use std::hint::black_box;

use cpc_core::analysis::{distance_with, monte_carlo, LookupDecoder};
use cpc_core::builder::search_cross_checks;
use cpc_core::{reference, Execution};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn bench_monte_carlo(c: &mut Criterion) {
    let q = reference::hamming_10_4_3().quantum();
    let decoder = LookupDecoder::build(&q).unwrap();
    let mut group = c.benchmark_group("monte_carlo_10_4_3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "200k shots"), |b| {
            b.iter(|| monte_carlo(&q, &decoder, black_box(0.01), 200_000, 7, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_distance(c: &mut Criterion) {
    let q = reference::hamming_10_4_3().quantum();
    let mut group = c.benchmark_group("distance_10_4_3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "max weight 4"), |b| {
            b.iter(|| distance_with(black_box(&q), 4, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_search(c: &mut Criterion) {
    let s = reference::hamming_10_4_1();
    let mut group = c.benchmark_group("search_10_4_1");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "target 3"), |b| {
            b.iter(|| search_cross_checks(black_box(&s), 3, 1 << 20, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_monte_carlo, bench_distance, bench_search);
criterion_main!(benches);
