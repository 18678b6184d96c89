use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use tsaug::augment::balance_dataset;
use tsaug::rocket::{generate_kernels, ridge_fit, transform, RidgeConfig};
use tsaug::{AugmenterSpec, RngStream, Technique};
use tsaug_bench::synthetic;

fn kernels(c: &mut Criterion) {
    c.bench_function("generate_kernels 10k (T=100, M=6)", |b| {
        b.iter(|| generate_kernels(10_000, 100, 6, &mut RngStream::new(0, "k")).unwrap())
    });
}

fn rocket_transform(c: &mut Criterion) {
    let ds = synthetic(&[10, 10], 6, 100, 1);
    let bank = generate_kernels(1_000, 100, 6, &mut RngStream::new(0, "k")).unwrap();
    c.bench_function("transform 20 series x 1k kernels", |b| {
        b.iter(|| transform(black_box(&ds), &bank).unwrap())
    });
}

fn ridge(c: &mut Criterion) {
    let ds = synthetic(&[50, 50, 50], 3, 60, 2);
    let bank = generate_kernels(2_000, 60, 3, &mut RngStream::new(0, "k")).unwrap();
    let x = transform(&ds, &bank).unwrap();
    let labels: Vec<usize> = ds.items().iter().map(|i| i.label).collect();
    let cfg = RidgeConfig::default();
    c.bench_function("ridge_fit 150 x 4000, 17 alphas", |b| {
        b.iter(|| ridge_fit(black_box(&x), &labels, ds.labels(), &cfg).unwrap())
    });
}

fn balance(c: &mut Criterion) {
    let ds = synthetic(&[60, 20, 8], 6, 100, 3);
    let mut group = c.benchmark_group("balance");
    for spec in ["noise_3", "smote", "gaussian-cov", "window-warp"] {
        let technique: Technique = spec.parse().unwrap();
        group.bench_function(spec, |b| {
            b.iter_batched(
                || AugmenterSpec::new(technique.clone(), RngStream::new(0, spec)),
                |s| balance_dataset(&ds, &s).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

criterion_group!(benches, kernels, rocket_transform, ridge, balance);
criterion_main!(benches);
