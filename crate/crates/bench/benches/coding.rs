use criterion::{criterion_group, criterion_main, Criterion};
use grassvol::coding::{distortion_lower_bound, lloyd_quantizer, random_code_distortion};
use grassvol::Params;
use std::hint::black_box;

fn bound(c: &mut Criterion) {
    let x = Params::new(8, 4, 4).unwrap();
    c.bench_function("distortion_lower_bound (8,4,4)", |b| b.iter(|| distortion_lower_bound(x, black_box(256.0)).unwrap()));
}

fn codes(c: &mut Criterion) {
    let x = Params::new(8, 4, 4).unwrap();
    let mut g = c.benchmark_group("codes (8,4,4) N=64");
    g.sample_size(10);
    g.bench_function("random", |b| b.iter(|| random_code_distortion(x, 64, 5_000, 1, black_box(3)).unwrap()));
    g.bench_function("lloyd", |b| b.iter(|| lloyd_quantizer(x, 64, 5_000, 10, black_box(3)).unwrap()));
    g.finish();
}

criterion_group!(benches, bound, codes);
criterion_main!(benches);
