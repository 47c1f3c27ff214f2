//! The normalized partition function `D_p(nu)` of the time-dependent Jacobi
//! ensemble, as a `p x p` Hankel determinant of [`det_entry`] values.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use statrs::function::factorial::ln_factorial;

use super::entry::{closed_form_parts, closed_form_threshold, det_entry, gauss_order};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::special::{beta_int, GaussLegendre};

/// Largest `p` accepted by the exact evaluators.
pub const MAX_EXACT_P: usize = 12;

/// Largest `p` for which `p! v_{n,p,q} det M(0) = 1` is checked at runtime.
const NORMALIZATION_CHECK_P: usize = 6;

/// Evaluates `D_p(nu) = det M(nu) / det M(0)` for a fixed canonical triple.
#[derive(Debug, Clone)]
pub struct DeterminantDp {
    params: Params,
    p: usize,
    b: u32,
    beta: u32,
    det0: f64,
}

impl DeterminantDp {
    pub fn new(params: Params) -> Result<Self> {
        if !params.is_canonical() {
            return Err(Error::invalid(format!("{params} is not canonical (need p <= q, p + q <= n)")));
        }
        let p = params.p();
        if p > MAX_EXACT_P {
            return Err(Error::UnsupportedSize { p, cap: MAX_EXACT_P });
        }
        let b = params.b() as u32;
        let beta = params.a() as u32 + 1;
        let m0 = DMatrix::from_fn(p, p, |i, j| beta_int(i as u32 + j as u32 + b + 1, beta));
        let det0 = m0.lu().determinant();
        if !(det0 > 0.0) {
            return Err(Error::Internal(format!("moment determinant of {params} is {det0}")));
        }
        if p <= NORMALIZATION_CHECK_P {
            let scaled = (ln_factorial(p as u64) + log_v(params) + det0.ln()).exp();
            if (scaled - 1.0).abs() > 1e-6 {
                return Err(Error::Internal(format!(
                    "p! v det M(0) = {scaled} for {params}, expected 1"
                )));
            }
        }
        Ok(DeterminantDp { params, p, b, beta, det0 })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    /// `alpha` of the anti-diagonal `i + j = k` (0-based `k`).
    fn alpha(&self, k: usize) -> u32 {
        k as u32 + self.b + 1
    }

    /// The `2p - 1` distinct Hankel entries at real `nu`.
    fn entries(&self, nu: f64) -> Vec<Complex64> {
        let count = 2 * self.p - 1;
        let top = self.alpha(count - 1);
        let a = nu.abs();
        if a > 1.0 && a < closed_form_threshold(top, self.beta) {
            // share nodes and exponentials across the anti-diagonals
            let rule = GaussLegendre::of_order(gauss_order(top + self.beta - 2, a));
            let mut out = vec![Complex64::new(0.0, 0.0); count];
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let t = 0.5 * (x + 1.0);
                let base = 0.5 * w * (1.0 - t).powi(self.beta as i32 - 1)
                    * Complex64::new(0.0, -nu * t).exp();
                let mut v = base * t.powi(self.b as i32);
                for slot in out.iter_mut() {
                    *slot += v;
                    v *= t;
                }
            }
            out
        } else {
            (0..count).map(|k| det_entry(self.alpha(k), self.beta, nu)).collect()
        }
    }

    /// `D_p(nu)`, normalized so that `D_p(0) = 1`.
    pub fn eval(&self, nu: f64) -> Complex64 {
        let e = self.entries(nu);
        let p = self.p;
        let m = DMatrix::from_fn(p, p, |i, j| e[i + j]);
        determinant(m) / self.det0
    }

    /// Splits `D_p(nu) = sum_{j=0..p} e^(-i j nu) Q_j(nu)` for complex `nu`
    /// far from the origin; each `Q_j` is a polynomial in `1/nu` without
    /// constant term. Returns `[Q_0, ..., Q_p]`.
    pub(crate) fn frequency_parts(&self, nu: Complex64) -> Vec<Complex64> {
        let p = self.p;
        let count = 2 * p - 1;
        let parts: Vec<(Complex64, Complex64)> =
            (0..count).map(|k| closed_form_parts(self.alpha(k), self.beta, nu)).collect();
        // det(A - z B) is a degree-p polynomial in z = e^(-i nu); sample it on
        // the (p+1)-th roots of unity and invert the discrete Fourier transform
        let m = p + 1;
        let mut samples = Vec::with_capacity(m);
        for k in 0..m {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
            let mat = DMatrix::from_fn(p, p, |i, j| {
                let (h, t) = parts[i + j];
                h - z * t
            });
            samples.push(determinant(mat));
        }
        (0..m)
            .map(|j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, s) in samples.iter().enumerate() {
                    acc += s * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / m as f64);
                }
                acc / (m as f64 * self.det0)
            })
            .collect()
    }

    /// Lower bound on `|nu|` where [`Self::frequency_parts`] is accurate.
    pub(crate) fn expansion_radius(&self) -> f64 {
        let deg = (self.params.n() - 2) as f64;
        (8.0 * deg).max(40.0)
    }
}

fn determinant(m: DMatrix<Complex64>) -> Complex64 {
    if m.nrows() == 1 {
        m[(0, 0)]
    } else {
        m.lu().determinant()
    }
}

/// `ln v_{n,p,q}` with `v = prod_j (n-j)! / (j! (n-q-j)! (q-j)!)`.
fn log_v(params: Params) -> f64 {
    let (n, p, q) = (params.n() as u64, params.p() as u64, params.q() as u64);
    (1..=p)
        .map(|j| ln_factorial(n - j) - ln_factorial(j) - ln_factorial(n - q - j) - ln_factorial(q - j))
        .sum()
}

/// `D_p(nu)` for a canonical triple with `p <= 12`.
pub fn determinant_dp(params: Params, nu: f64) -> Result<Complex64> {
    Ok(DeterminantDp::new(params)?.eval(nu))
}

/// `D_p(nu)` for `p = q = n/2` through the incomplete exponential sums
/// `Gamma(k) (1 - e^(-i nu) sum_{l<k} (i nu)^l / l!) / (i nu)^k`.
///
/// Cancels badly for `|nu|` small compared with `2p`; meant as an
/// independent cross-check of [`determinant_dp`] at moderate `nu`.
pub fn determinant_dp_qpn(params: Params, nu: f64) -> Result<Complex64> {
    let (n, p, q) = (params.n(), params.p(), params.q());
    if p != q || 2 * p != n {
        return Err(Error::invalid(format!("{params} does not satisfy p = q = n/2")));
    }
    if nu == 0.0 {
        return Err(Error::invalid("the p = q = n/2 form is singular at nu = 0"));
    }
    if p > MAX_EXACT_P {
        return Err(Error::UnsupportedSize { p, cap: MAX_EXACT_P });
    }
    let inu = Complex64::new(0.0, nu);
    let phase = Complex64::new(0.0, -nu).exp();
    let entry = |k: usize| -> Complex64 {
        // k = i + j - 1 >= 1 (1-based i, j)
        let mut partial = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for l in 0..k {
            if l > 0 {
                term *= inu / l as f64;
            }
            partial += term;
        }
        let gamma = (1..k).map(|i| i as f64).product::<f64>();
        gamma * (Complex64::new(1.0, 0.0) - phase * partial)
    };
    let m = DMatrix::from_fn(p, p, |i, j| entry(i + j + 1));
    let det0 = DMatrix::from_fn(p, p, |i, j| 1.0 / (i + j + 1) as f64).lu().determinant();
    Ok(determinant(m) / inu.powu((p * p) as u32) / det0)
}
