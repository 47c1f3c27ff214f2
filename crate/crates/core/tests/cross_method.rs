use grassvol::coding::{error_cdf, lloyd_quantizer, Codebook};
use grassvol::exact::{ExactVolume, QuadratureConfig, TABULATED};
use grassvol::monte_carlo::{estimate_volume, sample_distances_sq};
use grassvol::rng::rng_from_seed;
use grassvol::{volume, Params, VolumeMethod};

fn grid(x: Params, steps: usize) -> Vec<f64> {
    let max = (x.max_radius_sq() as f64).sqrt();
    (0..steps).map(|k| max * k as f64 / (steps - 1) as f64).collect()
}

#[test]
fn closed_form_and_quadrature_agree() {
    let cfg = QuadratureConfig::default();
    for (n, p, q) in TABULATED {
        let x = Params::new(n, p, q).unwrap();
        for r in grid(x, 21) {
            let a = volume(x, r, VolumeMethod::Closed, cfg).unwrap();
            let b = volume(x, r, VolumeMethod::Quadrature, cfg).unwrap();
            assert!((a - b).abs() < 1e-8, "{x} r = {r}: {a} vs {b}");
        }
    }
}

#[test]
fn monte_carlo_brackets_quadrature() {
    let x = Params::new(6, 2, 3).unwrap();
    let ev = ExactVolume::new(x, QuadratureConfig::default()).unwrap();
    let g = grid(x, 9);
    for e in estimate_volume(x, &g, 40_000, 17).unwrap() {
        let exact = ev.volume(e.r).unwrap();
        let se = e.stderr.max((exact * (1.0 - exact) / e.samples as f64).sqrt());
        assert!((e.mu_hat - exact).abs() <= 4.0 * se + 1e-12, "r = {}: {} vs {exact}", e.r, e.mu_hat);
    }
}

/// Kolmogorov-Smirnov distance between sampled `d_c^2` and the exact CDF.
#[test]
fn haar_samples_follow_the_exact_distribution() {
    for (n, p, q) in [(4, 2, 2), (7, 2, 3), (8, 3, 4)] {
        let x = Params::new(n, p, q).unwrap();
        let ev = ExactVolume::new(x, QuadratureConfig::default()).unwrap();
        let count = 4000;
        let mut draws = sample_distances_sq(x, count, &mut rng_from_seed(n as u64));
        draws.sort_by(f64::total_cmp);
        let mut ks: f64 = 0.0;
        for (i, &s) in draws.iter().enumerate() {
            let f = ev.volume(s.sqrt()).unwrap();
            ks = ks.max((f - i as f64 / count as f64).abs()).max(((i + 1) as f64 / count as f64 - f).abs());
        }
        // 1% critical value
        assert!(ks < 1.63 / (count as f64).sqrt(), "{x}: KS = {ks}");
    }
}

#[test]
fn singleton_error_cdf_is_the_ball_volume() {
    let x = Params::new(4, 2, 2).unwrap();
    let code = Codebook::random(4, 2, 1, &mut rng_from_seed(1)).unwrap();
    let z: Vec<f64> = (0..=8).map(|k| 0.25 * k as f64).collect();
    let samples = 20_000;
    let f = error_cdf(&code, &z, samples, 2).unwrap();
    for (zi, fi) in z.iter().zip(&f) {
        let mu = volume(x, zi.sqrt(), VolumeMethod::Closed, QuadratureConfig::default()).unwrap();
        let se = (mu * (1.0 - mu) / samples as f64).sqrt();
        assert!((fi - mu).abs() <= 4.0 * se + 1e-12, "z = {zi}: {fi} vs {mu}");
    }
}

#[test]
fn error_cdf_obeys_union_bound() {
    let cfg = QuadratureConfig::default();
    for (n, p, size) in [(4, 2, 8), (8, 4, 16)] {
        let x = Params::new(n, p, p).unwrap();
        let random = Codebook::random(n, p, size, &mut rng_from_seed(3)).unwrap();
        let trained = lloyd_quantizer(x, size, 4000, 10, 3).unwrap().codebook;
        let max = x.max_radius_sq() as f64;
        let z: Vec<f64> = (0..=10).map(|k| max * k as f64 / 10.0).collect();
        let samples = 10_000;
        for code in [&random, &trained] {
            let f = error_cdf(code, &z, samples, 4).unwrap();
            for (zi, fi) in z.iter().zip(&f) {
                let mu = volume(x, zi.sqrt(), VolumeMethod::Quadrature, cfg).unwrap();
                let cap = (size as f64 * mu).min(1.0);
                let se = (cap * (1.0 - cap) / samples as f64).sqrt().max(1.0 / samples as f64);
                assert!(*fi <= cap + 3.0 * se, "{x} z = {zi}: {fi} > {cap}");
            }
        }
    }
}
