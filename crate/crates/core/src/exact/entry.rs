//! The one-dimensional integrals `int_0^1 x^(alpha-1) (1-x)^(beta-1) e^(-i nu x) dx`.
//!
//! Three branches, all exact expansions of the same integral:
//!
//! * `|nu| <= 1`: the power series `B(alpha, beta) 1F1(alpha; alpha+beta; -i nu)`.
//! * large `|nu|`: repeated integration by parts, which terminates because
//!   the integrand is a polynomial times an exponential:
//!   `sum_k (f^(k)(0) - e^(-i nu) f^(k)(1)) / (i nu)^(k+1)`.
//! * in between: Gauss-Legendre with enough nodes to resolve both the
//!   polynomial and the oscillation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{beta_int, GaussLegendre};

const SERIES_RADIUS: f64 = 1.0;

/// Exponents `alpha = i + j + n - p - q - 1` and `beta = q - p + 1` of a
/// determinant entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeterminantEntryParams {
    pub alpha: u32,
    pub beta: u32,
}

impl DeterminantEntryParams {
    pub fn new(alpha: u32, beta: u32) -> Result<Self> {
        if alpha == 0 || beta == 0 {
            return Err(Error::invalid(format!(
                "entry exponents must be positive, got alpha = {alpha}, beta = {beta}"
            )));
        }
        Ok(DeterminantEntryParams { alpha, beta })
    }

    /// Degree of the polynomial `x^(alpha-1) (1-x)^(beta-1)`.
    pub fn degree(&self) -> u32 {
        self.alpha + self.beta - 2
    }

    /// `B(alpha, beta)`, the value at `nu = 0`.
    pub fn beta_function(&self) -> f64 {
        beta_int(self.alpha, self.beta)
    }

    pub fn eval(&self, nu: f64) -> Complex64 {
        det_entry(self.alpha, self.beta, nu)
    }
}

/// `int_0^1 x^(alpha-1) (1-x)^(beta-1) e^(-i nu x) dx` for integers
/// `alpha, beta >= 1`.
///
/// # Panics
/// If `alpha` or `beta` is zero.
pub fn det_entry(alpha: u32, beta: u32, nu: f64) -> Complex64 {
    assert!(alpha >= 1 && beta >= 1, "det_entry needs alpha, beta >= 1");
    let a = nu.abs();
    if a <= SERIES_RADIUS {
        series(alpha, beta, nu)
    } else if a >= closed_form_threshold(alpha, beta) {
        let (head, tail) = closed_form_parts(alpha, beta, Complex64::new(nu, 0.0));
        head - Complex64::new(0.0, -nu).exp() * tail
    } else {
        let rule = GaussLegendre::of_order(gauss_order(alpha + beta - 2, a));
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let t = 0.5 * (x + 1.0);
            acc += w * poly(alpha, beta, t) * Complex64::new(0.0, -nu * t).exp();
        }
        0.5 * acc
    }
}

/// Below this `|nu|` the integration-by-parts sum loses digits.
pub(crate) fn closed_form_threshold(alpha: u32, beta: u32) -> f64 {
    (4.0 * (alpha + beta) as f64).max(40.0)
}

pub(crate) fn gauss_order(degree: u32, abs_nu: f64) -> usize {
    let need = (degree as f64 + 0.5 * abs_nu + 40.0) / 2.0;
    (need.ceil() as usize).div_ceil(8) * 8
}

#[inline]
fn poly(alpha: u32, beta: u32, x: f64) -> f64 {
    x.powi(alpha as i32 - 1) * (1.0 - x).powi(beta as i32 - 1)
}

fn series(alpha: u32, beta: u32, nu: f64) -> Complex64 {
    let (a, b) = (alpha as f64, beta as f64);
    let step = Complex64::new(0.0, -nu);
    let mut term = Complex64::new(beta_int(alpha, beta), 0.0);
    let mut sum = term;
    for k in 0..200 {
        let kf = k as f64;
        term *= step * ((a + kf) / ((a + b + kf) * (kf + 1.0)));
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Splits the integration-by-parts expansion as `head(nu) - e^(-i nu) tail(nu)`,
/// where both parts are polynomials in `1 / (i nu)` without constant term.
/// Valid for complex `nu != 0`; accurate once `|nu|` is well above the degree.
pub(crate) fn closed_form_parts(alpha: u32, beta: u32, nu: Complex64) -> (Complex64, Complex64) {
    let w = (Complex64::i() * nu).inv();
    let deg = alpha + beta - 2;
    let mut head = Complex64::new(0.0, 0.0);
    let mut tail = Complex64::new(0.0, 0.0);
    // t_k = k! w^(k+1)
    let mut t = w;
    for k in 0..=deg {
        if k > 0 {
            t *= w * k as f64;
        }
        if k + 1 >= alpha {
            let l = k + 1 - alpha;
            let c = binomial(beta - 1, l) * if l % 2 == 0 { 1.0 } else { -1.0 };
            head += t * c;
        }
        if k + 1 >= beta {
            let l = k + 1 - beta;
            let sign = if (k + l) % 2 == 0 { 1.0 } else { -1.0 };
            tail += t * (binomial(alpha - 1, l) * sign);
        }
    }
    (head, tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    /// Composite Gauss-Legendre on many small panels.
    fn brute(alpha: u32, beta: u32, nu: f64) -> Complex64 {
        let rule = GaussLegendre::of_order(20);
        let panels = 400;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..panels {
            let lo = k as f64 / panels as f64;
            let hi = (k + 1) as f64 / panels as f64;
            let re = rule.integrate(lo, hi, |x| poly(alpha, beta, x) * (nu * x).cos());
            let im = rule.integrate(lo, hi, |x| -poly(alpha, beta, x) * (nu * x).sin());
            acc += Complex64::new(re, im);
        }
        acc
    }

    #[test]
    fn elementary_values() {
        assert!(close(det_entry(1, 1, 0.0), Complex64::new(1.0, 0.0), 1e-15));
        assert!(close(det_entry(2, 1, 0.0), Complex64::new(0.5, 0.0), 1e-15));
        assert!(close(det_entry(1, 1, PI), Complex64::new(0.0, -2.0 / PI), 1e-14));
    }

    #[test]
    fn matches_brute_force_quadrature() {
        assert!(close(det_entry(3, 2, 5.0), brute(3, 2, 5.0), 1e-12));
        for &(a, b) in &[(1, 1), (2, 3), (5, 1), (7, 4), (12, 6)] {
            for &nu in &[-70.0, -3.0, -0.7, 0.3, 0.99, 1.01, 8.0, 39.0, 41.0, 90.0, 150.0] {
                let got = det_entry(a, b, nu);
                let want = brute(a, b, nu);
                assert!(close(got, want, 1e-13), "({a},{b},{nu}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn branches_agree_near_crossovers() {
        for &(a, b) in &[(2, 2), (6, 3)] {
            let t = closed_form_threshold(a, b);
            for &nu in &[1.0, 1.0 + 1e-12, t - 1e-9, t] {
                assert!(close(det_entry(a, b, nu), brute(a, b, nu), 1e-13));
            }
        }
    }

    #[test]
    fn closed_form_parts_recombine() {
        let nu = 55.0;
        let (h, t) = closed_form_parts(4, 3, Complex64::new(nu, 0.0));
        let got = h - Complex64::new(0.0, -nu).exp() * t;
        assert!(close(got, brute(4, 3, nu), 1e-14));
    }

    #[test]
    fn conjugate_symmetry() {
        for &nu in &[0.5, 4.0, 60.0] {
            assert!(close(det_entry(3, 2, -nu), det_entry(3, 2, nu).conj(), 1e-15));
        }
    }

    #[test]
    fn rejects_zero_exponents() {
        assert!(DeterminantEntryParams::new(0, 1).is_err());
        let e = DeterminantEntryParams::new(3, 2).unwrap();
        assert_eq!(e.degree(), 3);
        assert!((e.beta_function() - 1.0 / 12.0).abs() < 1e-16);
    }
}
