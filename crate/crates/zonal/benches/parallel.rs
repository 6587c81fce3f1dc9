//! Benchmarks comparing the data-parallel Gram assembly against the
//! sequential fallback, plus batch derivative evaluation.
//!
//! Run with `cargo bench -p zonal`; build with `--no-default-features` to
//! measure the purely sequential configuration (the `gram` entry then
//! coincides with `gram_serial`).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use zonal::coeffs::{CoeffSeq, Tail};
use zonal::kernels::ZonalKernel;
use zonal::spaces::Space;

fn demo_kernel(space: Space) -> ZonalKernel {
    let params = space.jacobi_params().unwrap();
    let coeffs = CoeffSeq::with_tail(
        params,
        vec![1.0],
        Tail::Geometric {
            ratio: 0.6,
            scale: 1.0,
        },
    )
    .unwrap();
    ZonalKernel::new(space, coeffs).unwrap()
}

fn bench_gram(c: &mut Criterion) {
    let mut group = c.benchmark_group("gram");
    for &n in &[16usize, 64, 128] {
        let kernel = demo_kernel(Space::Sphere(7));
        let points = Space::Sphere(7).sample_points(n, 7).unwrap();
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, _| {
            b.iter(|| kernel.gram(black_box(&points)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("serial", n), &n, |b, _| {
            b.iter(|| kernel.gram_serial(black_box(&points)).unwrap())
        });
    }
    group.finish();
}

fn bench_derivative_eval(c: &mut Criterion) {
    let kernel = demo_kernel(Space::Sphere(7));
    let derivative = kernel.differentiate(3).unwrap();
    let grid: Vec<f64> = (1..400).map(|i| -0.99 + 0.005 * i as f64).collect();
    c.bench_function("third_derivative_grid", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for &t in black_box(&grid) {
                acc += derivative.eval(t).unwrap().value;
            }
            acc
        })
    });
}

criterion_group!(benches, bench_gram, bench_derivative_eval);
criterion_main!(benches);
