//! Error function helpers and Gauss-Legendre rules.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub use libm::{erf, erfc};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Inverse error function on `(-1, 1)`, polished by Newton steps on [`erf`].
///
/// Returns `-inf` / `+inf` at or beyond the endpoints.
pub fn erf_inv(y: f64) -> f64 {
    if y.is_nan() {
        return f64::NAN;
    }
    if y <= -1.0 {
        return f64::NEG_INFINITY;
    }
    if y >= 1.0 {
        return f64::INFINITY;
    }
    if y == 0.0 {
        return 0.0;
    }
    let mut x = statrs::function::erf::erf_inv(y);
    for _ in 0..3 {
        // near the tails the residual is better computed through erfc
        let residual = if x.abs() > 0.5 {
            if x > 0.0 {
                (1.0 - y) - erfc(x)
            } else {
                erfc(-x) - (1.0 + y)
            }
        } else {
            erf(x) - y
        };
        let slope = FRAC_2_SQRT_PI * (-x * x).exp();
        if slope == 0.0 {
            break;
        }
        let step = residual / slope;
        x -= step;
        if step.abs() <= 1e-17 * x.abs() {
            break;
        }
    }
    x
}

/// Inverse complementary error function on `(0, 2)`, polished by Newton
/// steps on [`erfc`]. Keeps full relative accuracy for arguments near 0.
pub fn erfc_inv(c: f64) -> f64 {
    if c.is_nan() {
        return f64::NAN;
    }
    if c <= 0.0 {
        return f64::INFINITY;
    }
    if c >= 2.0 {
        return f64::NEG_INFINITY;
    }
    if c == 1.0 {
        return 0.0;
    }
    let mut x = statrs::function::erf::erfc_inv(c);
    for _ in 0..4 {
        let slope = -FRAC_2_SQRT_PI * (-x * x).exp();
        if slope == 0.0 {
            break;
        }
        let step = (erfc(x) - c) / slope;
        x -= step;
        if step.abs() <= 1e-17 * x.abs() {
            break;
        }
    }
    x
}

/// `erf(x) - erf(y)` without cancellation when both arguments sit in the
/// same tail.
pub fn erf_diff(x: f64, y: f64) -> f64 {
    if x > 0.5 && y > 0.5 {
        erfc(y) - erfc(x)
    } else if x < -0.5 && y < -0.5 {
        erfc(-x) - erfc(-y)
    } else {
        erf(x) - erf(y)
    }
}

/// Nodes and weights of an `order`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(order: usize) -> Self {
        assert!(order >= 1);
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let nf = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Shared rule of the given order. Rules are computed once and never
    /// mutated afterwards, so results do not depend on call order.
    pub fn of_order(order: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard.entry(order).or_insert_with(|| Arc::new(GaussLegendre::compute(order))).clone()
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrates `f` over `[lo, hi]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let n = order as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Beta function `B(alpha, beta)` for positive integer arguments.
pub fn beta_int(alpha: u32, beta: u32) -> f64 {
    // B(a, b) = (b-1)! / (a (a+1) ... (a+b-1))
    let a = alpha as f64;
    let mut value = 1.0 / a;
    for i in 1..beta {
        value *= i as f64 / (a + i as f64);
    }
    value
}
