use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use vistra::classify::{rf_train_with, ForestParams};
use vistra::features::{ColumnMeta, FeatureMatrix};
use vistra::visibility::{build, VgParams};
use vistra::{Execution, TimeSeries};

fn noise(n: usize, seed: u64) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TimeSeries::new((0..n).map(|_| rng.random::<f64>()).collect(), 1.0).unwrap()
}

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn visibility(c: &mut Criterion) {
    let series = noise(1000, 7);
    let mut group = c.benchmark_group("visibility_n1000");
    group.sample_size(20);
    for (label, params) in [("lpvg_m1", VgParams::lpvg(1)), ("clpvg_m1_a10", VgParams::clpvg(1, 10.0))] {
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(label, mode), &exec, |b, &exec| {
                b.iter(|| build(black_box(&series), &params, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn forest(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rows: Vec<Vec<f64>> = (0..300).map(|_| (0..32).map(|_| rng.random::<f64>()).collect()).collect();
    let labels: Vec<String> = rows.iter().map(|r| if r[0] + r[1] > 1.0 { "a" } else { "b" }.to_string()).collect();
    let x = FeatureMatrix::new(rows, labels, ColumnMeta::block("f", 0, None, 32)).unwrap();
    let params = ForestParams {
        n_trees: 50,
        ..ForestParams::default()
    };
    let mut group = c.benchmark_group("forest_300x32");
    group.sample_size(10);
    for (mode, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(mode), &exec, |b, &exec| {
            b.iter(|| rf_train_with(black_box(&x), &params, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, visibility, forest);
criterion_main!(benches);
