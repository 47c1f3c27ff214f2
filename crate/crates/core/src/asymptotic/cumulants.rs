//! Cumulants of the linear statistic `Y = sum_j (x_j - 1/2)`, where the
//! `x_j = sin^2(theta_j)` are the squared sines of the principal angles
//! between a fixed center and a Haar-random point, so that `d_c^2 = Y + p/2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::params::Params;

type Q = BigRational;

/// Highest order returned by [`cumulants_recursive`].
pub const MAX_CUMULANT_ORDER: usize = 8;

fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// First three cumulants of `Y`, exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cumulants {
    pub kappa1: Q,
    pub kappa2: Q,
    pub kappa3: Q,
}

impl Cumulants {
    pub fn kappa1_f64(&self) -> f64 {
        self.kappa1.to_f64().unwrap_or(f64::NAN)
    }

    pub fn kappa2_f64(&self) -> f64 {
        self.kappa2.to_f64().unwrap_or(f64::NAN)
    }

    pub fn kappa3_f64(&self) -> f64 {
        self.kappa3.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_slice(&self) -> [&Q; 3] {
        [&self.kappa1, &self.kappa2, &self.kappa3]
    }
}

fn require_canonical(params: Params) -> Result<()> {
    if params.is_canonical() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{params} is not canonical (need p <= q, p + q <= n)")))
    }
}

/// `kappa1 = p(n-2q)/(2n)`, `kappa2 = pq(n-p)(n-q)/(n^2(n^2-1))`,
/// `kappa3 = -2pq(n-2p)(n-2q)(n-p)(n-q)/(n^3(n^4-5n^2+4))`.
///
/// For `n = 2` the last denominator vanishes together with the numerator;
/// `Y` is then symmetric and `kappa3 = 0`.
pub fn cumulants_closed(params: Params) -> Result<Cumulants> {
    require_canonical(params)?;
    let (n, p, q) = (params.n() as i64, params.p() as i64, params.q() as i64);
    let kappa1 = int(p * (n - 2 * q)) / int(2 * n);
    let kappa2 = int(p) * int(q) * int(n - p) * int(n - q) / (int(n * n) * int(n * n - 1));
    let den = int(n).pow(3) * (int(n).pow(4) - int(5 * n * n) + int(4));
    let kappa3 = if den.is_zero() {
        Q::zero()
    } else {
        -int(2) * int(p) * int(q) * int(n - 2 * p) * int(n - 2 * q) * int(n - p) * int(n - q) / den
    };
    Ok(Cumulants { kappa1, kappa2, kappa3 })
}

/// Truncated power series with rational coefficients.
#[derive(Clone, Debug)]
struct Series(Vec<Q>);

impl Series {
    fn zero(len: usize) -> Self {
        Series(vec![Q::zero(); len])
    }

    fn len(&self) -> usize {
        self.0.len()
    }

    fn mul(&self, other: &Series) -> Series {
        let len = self.len();
        let mut out = Series::zero(len);
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate().take(len - i) {
                out.0[i + j] += a * b;
            }
        }
        out
    }

    fn add(&self, other: &Series) -> Series {
        Series(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, other: &Series) -> Series {
        Series(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn scale(&self, c: &Q) -> Series {
        Series(self.0.iter().map(|a| a * c).collect())
    }

    fn derivative(&self) -> Series {
        let mut out = Series::zero(self.len());
        for k in 1..self.len() {
            out.0[k - 1] = &self.0[k] * int(k as i64);
        }
        out
    }

    /// Multiplication by `nu`.
    fn shift(&self) -> Series {
        let mut out = Series::zero(self.len());
        for k in 1..self.len() {
            out.0[k] = self.0[k - 1].clone();
        }
        out
    }

    fn inverse(&self) -> Series {
        let len = self.len();
        let mut out = Series::zero(len);
        let c0 = self.0[0].recip();
        out.0[0] = c0.clone();
        for k in 1..len {
            let mut acc = Q::zero();
            for i in 1..=k {
                acc += &self.0[i] * &out.0[k - i];
            }
            out.0[k] = -acc * &c0;
        }
        out
    }

    /// `log` of a series with constant term 1.
    fn log(&self) -> Series {
        let d = self.derivative().mul(&self.inverse());
        let mut out = Series::zero(self.len());
        for k in 1..self.len() {
            out.0[k] = &d.0[k - 1] / int(k as i64);
        }
        out
    }
}

/// Coefficient of `nu^order` in `LHS - RHS` of
/// `(2 nu s'')^2 = (s - nu s' + 2 n s')^2 + 4 (s - nu s' - p(p+b)) ((2 s')^2 - 2 a s')`.
fn ode_residual(params: Params, kappas: &[Q], order: usize) -> Q {
    let len = order + 3;
    let (p, a, b, n) = (params.p() as i64, params.a(), params.b(), params.n() as i64);
    let mut sigma = Series::zero(len);
    sigma.0[0] = int(p * (p + b));
    sigma.0[1] = int(-p) / int(4);
    for (idx, kappa) in kappas.iter().enumerate() {
        let j = idx + 1;
        if j >= len {
            break;
        }
        let sign = if j % 2 == 0 { int(1) } else { int(-1) };
        let den = Q::from_integer(BigInt::from(2).pow(j as u32) * factorial(j - 1));
        sigma.0[j] += kappa * sign / den;
    }
    let d1 = sigma.derivative();
    let d2 = d1.derivative();
    let lhs = d2.shift().scale(&int(2));
    let lhs = lhs.mul(&lhs);
    let inner = sigma.sub(&d1.shift()).add(&d1.scale(&int(2 * n)));
    let mut shifted = sigma.sub(&d1.shift());
    shifted.0[0] -= int(p * (p + b));
    let twice = d1.scale(&int(2));
    let quad = twice.mul(&twice).sub(&d1.scale(&int(2 * a)));
    let rhs = inner.mul(&inner).add(&shifted.mul(&quad).scale(&int(4)));
    lhs.0[order].clone() - &rhs.0[order]
}

/// Residual at order `k` as `A x^2 + B x + C` in the unknown `x = kappa_k`.
fn residual_quadratic(params: Params, known: &[Q], k: usize) -> (Q, Q, Q) {
    let eval = |x: i64| {
        let mut ks = known.to_vec();
        ks.push(int(x));
        ode_residual(params, &ks, k)
    };
    let (e0, e1, e2) = (eval(0), eval(1), eval(2));
    let a = (&e2 - &e1 * int(2) + &e0) / int(2);
    let b = &e1 - &e0 - &a;
    (a, b, e0)
}

/// Cumulants `kappa_1..kappa_max_order` of `Y` from the Painleve-type
/// equation satisfied by `log D_p`, solved order by order in exact
/// arithmetic.
///
/// At order `n + 1` the equation leaves `kappa_{n+1}` undetermined; that
/// cumulant is taken from [`cumulants_series`] and the recursion continues.
pub fn cumulants_recursive(params: Params, max_order: usize) -> Result<Vec<Q>> {
    require_canonical(params)?;
    if max_order == 0 || max_order > MAX_CUMULANT_ORDER {
        return Err(Error::invalid(format!(
            "max_order must lie in 1..={MAX_CUMULANT_ORDER}, got {max_order}"
        )));
    }
    let mut kappas: Vec<Q> = Vec::with_capacity(max_order);
    // order 0 fixes kappa_1 as a double root
    let (a, b, c) = residual_quadratic(params, &[], 0);
    if a.is_zero() || !(&b * &b - &a * &c * int(4)).is_zero() {
        return Err(Error::Internal(format!("order-0 equation for {params} has no double root")));
    }
    kappas.push(-b / (a * int(2)));
    if !ode_residual(params, &kappas, 1).is_zero() {
        return Err(Error::Internal(format!("order-1 equation for {params} is inconsistent")));
    }
    let mut fallback: Option<Vec<Q>> = None;
    for k in 2..=max_order {
        let (a, b, c) = residual_quadratic(params, &kappas, k);
        let value = if k == 2 {
            // the other root, kappa_2 = 0, is spurious
            if !c.is_zero() || a.is_zero() || b.is_zero() {
                return Err(Error::Internal(format!("order-2 equation for {params} is degenerate")));
            }
            -b / a
        } else {
            if !a.is_zero() {
                return Err(Error::Internal(format!("order-{k} equation for {params} is not linear")));
            }
            if b.is_zero() {
                if !c.is_zero() {
                    return Err(Error::Internal(format!("order-{k} equation for {params} is inconsistent")));
                }
                let series = match &fallback {
                    Some(s) => s,
                    None => fallback.insert(cumulants_series(params, max_order)?),
                };
                series[k - 1].clone()
            } else {
                -c / b
            }
        };
        kappas.push(value);
    }
    Ok(kappas)
}

/// Cumulants of `Y` from the Taylor expansion of `log det M(t)`, where
/// `M(t)_{ij} = sum_k t^k / k! B(alpha_ij + k, beta)` is the moment
/// generating function of `d_c^2` in Hankel form.
pub fn cumulants_series(params: Params, max_order: usize) -> Result<Vec<Q>> {
    require_canonical(params)?;
    if max_order == 0 {
        return Err(Error::invalid("max_order must be positive"));
    }
    let p = params.p();
    let beta = params.a() as u64 + 1;
    let b = params.b() as u64;
    let len = max_order + 1;
    // B(alpha, beta) = (alpha-1)! (beta-1)! / (alpha+beta-1)!
    let beta_fn = |alpha: u64| -> Q {
        Q::new(
            factorial(alpha as usize - 1) * factorial(beta as usize - 1),
            factorial((alpha + beta) as usize - 1),
        )
    };
    let entry = |alpha: u64| -> Series {
        let mut s = Series::zero(len);
        for k in 0..len {
            s.0[k] = beta_fn(alpha + k as u64) / Q::from_integer(factorial(k));
        }
        s
    };
    let mut m: Vec<Vec<Series>> = (0..p)
        .map(|i| (0..p).map(|j| entry((i + j) as u64 + b + 1)).collect())
        .collect();
    // Gaussian elimination over truncated series; the leading principal
    // minors of the moment matrix are positive, so no pivoting is needed.
    let mut det = Series::zero(len);
    det.0[0] = Q::one();
    for col in 0..p {
        let pivot = m[col][col].clone();
        if pivot.0[0].is_zero() || pivot.0[0].is_negative() {
            return Err(Error::Internal(format!("moment matrix of {params} lost definiteness")));
        }
        det = det.mul(&pivot);
        let inv = pivot.inverse();
        for row in col + 1..p {
            let factor = m[row][col].mul(&inv);
            for c in col..p {
                let t = factor.mul(&m[col][c]);
                m[row][c] = m[row][c].sub(&t);
            }
        }
    }
    let norm = det.0[0].clone();
    let log = det.scale(&norm.recip()).log();
    let mut out: Vec<Q> = (1..=max_order)
        .map(|j| &log.0[j] * Q::from_integer(factorial(j)))
        .collect();
    out[0] -= int(p as i64) / int(2);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, p: usize, q: usize) -> Params {
        Params::new(n, p, q).unwrap()
    }

    fn r(a: i64, b: i64) -> Q {
        int(a) / int(b)
    }

    #[test]
    fn closed_form_examples() {
        let c = cumulants_closed(params(4, 2, 2)).unwrap();
        assert_eq!(c.as_slice(), [&r(0, 1), &r(1, 15), &r(0, 1)]);
        let c = cumulants_closed(params(5, 2, 3)).unwrap();
        assert_eq!(c.as_slice(), [&r(-1, 5), &r(3, 50), &r(1, 875)]);
        let c = cumulants_closed(params(6, 3, 3)).unwrap();
        assert_eq!(c.kappa2, r(9, 140));
        let c = cumulants_closed(params(2, 1, 1)).unwrap();
        assert_eq!(c.kappa3, r(0, 1));
        assert!(cumulants_closed(params(5, 3, 2)).is_err());
    }

    #[test]
    fn recursion_matches_closed_forms() {
        for x in Params::all_canonical(9) {
            let c = cumulants_closed(x).unwrap();
            let rec = cumulants_recursive(x, 3).unwrap();
            assert_eq!(rec, vec![c.kappa1.clone(), c.kappa2.clone(), c.kappa3.clone()], "{x}");
        }
    }

    #[test]
    fn series_matches_closed_forms() {
        for x in Params::all_canonical(7) {
            let c = cumulants_closed(x).unwrap();
            let ser = cumulants_series(x, 3).unwrap();
            assert_eq!(ser, vec![c.kappa1, c.kappa2, c.kappa3], "{x}");
        }
    }

    #[test]
    fn higher_orders_agree_with_series() {
        // includes resonant orders k = n + 1 for n <= 7
        for x in Params::all_canonical(7) {
            let rec = cumulants_recursive(x, 8).unwrap();
            let ser = cumulants_series(x, 8).unwrap();
            assert_eq!(rec, ser, "{x}");
        }
    }

    #[test]
    fn order_bounds() {
        assert!(cumulants_recursive(params(4, 2, 2), 0).is_err());
        assert!(cumulants_recursive(params(4, 2, 2), 9).is_err());
    }
}
