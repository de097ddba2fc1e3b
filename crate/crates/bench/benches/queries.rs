//! Query-time benchmarks: Type-I square queries against candidate sets of
//! increasing size, plus the structure build itself.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chromaspan::scss;
use chromaspan::Point;
use chromaspan_bench::synthetic_squares;

const SIZES: &[usize] = &[1_000, 10_000, 100_000];

fn query_points(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0)))
        .collect()
}

fn bench_type1_query(c: &mut Criterion) {
    let mut group = c.benchmark_group("scss_type1_query");
    for &n in SIZES {
        let index = scss::build_from_squares(synthetic_squares(n, 7));
        let queries = query_points(256, 11);
        group.throughput(Throughput::Elements(queries.len() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            let mut i = 0usize;
            b.iter(|| {
                let q = queries[i % queries.len()];
                i += 1;
                std::hint::black_box(index.query_contained(q))
            });
        });
    }
    group.finish();
}

fn bench_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("scss_build_from_squares");
    group.sample_size(10);
    for &n in SIZES {
        let squares = synthetic_squares(n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| std::hint::black_box(scss::build_from_squares(squares.clone())));
        });
    }
    group.finish();
}

criterion_group!(benches, bench_type1_query, bench_build);
criterion_main!(benches);
