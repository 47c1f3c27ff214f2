use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use grassvol::exact::{determinant_dp, volume_quadrature, QuadratureConfig};
use grassvol::monte_carlo::estimate_volume;
use grassvol::Params;
use std::hint::black_box;

fn triples() -> [Params; 3] {
    [Params::new(4, 2, 2).unwrap(), Params::new(8, 4, 4).unwrap(), Params::new(12, 6, 6).unwrap()]
}

fn determinant(c: &mut Criterion) {
    let mut g = c.benchmark_group("determinant_dp");
    for x in triples() {
        g.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| b.iter(|| determinant_dp(x, black_box(3.7)).unwrap()));
    }
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    let mut g = c.benchmark_group("volume_quadrature");
    g.sample_size(10);
    for x in triples() {
        g.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| {
            b.iter(|| volume_quadrature(x, black_box(1.0), QuadratureConfig::default()).unwrap())
        });
    }
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let x = Params::new(8, 4, 4).unwrap();
    let grid: Vec<f64> = (0..11).map(|k| 0.2 * k as f64).collect();
    c.bench_function("estimate_volume (8,4,4) 10k", |b| b.iter(|| estimate_volume(x, &grid, 10_000, black_box(1)).unwrap()));
}

criterion_group!(benches, determinant, quadrature, monte_carlo);
criterion_main!(benches);
