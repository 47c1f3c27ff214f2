use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};

/// Natural log of `vol G(n, q) = pi^{q(n-q)} prod_{i=1..q} (q-i)! / (n-i)!`.
pub fn grassmannian_log_volume(n: usize, q: usize) -> Result<f64> {
    if q == 0 || q >= n {
        return Err(Error::invalid(format!("G({n}, {q}) needs 1 <= q <= n-1")));
    }
    let mut acc = (q * (n - q)) as f64 * std::f64::consts::PI.ln();
    for i in 1..=q {
        acc += ln_factorial((q - i) as u64) - ln_factorial((n - i) as u64);
    }
    Ok(acc)
}

/// Volume of `G(n, q)` under the chordal-distance normalization.
///
/// Returns [`Error::Overflow`] (carrying the log-volume) when the value is
/// not representable; use [`grassmannian_log_volume`] for large `n`.
pub fn grassmannian_volume(n: usize, q: usize) -> Result<f64> {
    let log = grassmannian_log_volume(n, q)?;
    let v = log.exp();
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Overflow(log))
    }
}
