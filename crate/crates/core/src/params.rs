//! Dimension triples `(n, p, q)` and their symmetry reductions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack accepted when a radius sits on the upper end of its range.
///
/// `sqrt(2) * sqrt(2)` is `2.0000000000000004` in f64; such inputs are clamped
/// to `d_max^2` instead of being rejected.
pub const RADIUS_SLACK: f64 = 1e-12;

/// Ambient dimension `n`, center dimension `p` and ball-element dimension `q`.
///
/// A ball `B_{P,q}(r)` collects the `q`-dimensional subspaces of `C^n` whose
/// chordal distance to a fixed `p`-dimensional center is at most `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct Params {
    n: usize,
    p: usize,
    q: usize,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: usize,
    p: usize,
    q: usize,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.n, raw.p, raw.q)
    }
}

impl From<Params> for RawParams {
    fn from(p: Params) -> Self {
        RawParams { n: p.n, p: p.p, q: p.q }
    }
}

impl Params {
    /// Validates `1 <= p <= n-1` and `1 <= q <= n-1`.
    pub fn new(n: usize, p: usize, q: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("ambient dimension n = {n} must be at least 2")));
        }
        if p == 0 || p >= n {
            return Err(Error::invalid(format!("p = {p} must satisfy 1 <= p <= n-1 = {}", n - 1)));
        }
        if q == 0 || q >= n {
            return Err(Error::invalid(format!("q = {q} must satisfy 1 <= q <= n-1 = {}", n - 1)));
        }
        Ok(Params { n, p, q })
    }

    /// Builds a triple and reduces it to its canonical representative.
    pub fn canonical(n: usize, p: usize, q: usize) -> Result<Self> {
        Ok(Self::new(n, p, q)?.canonicalize())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of principal angles, `min(p, q)`.
    pub fn m(&self) -> usize {
        self.p.min(self.q)
    }

    /// Jacobi exponent `q - p`. Non-negative for canonical triples.
    pub fn a(&self) -> i64 {
        self.q as i64 - self.p as i64
    }

    /// Jacobi exponent `n - p - q`. Non-negative for canonical triples.
    pub fn b(&self) -> i64 {
        self.n as i64 - self.p as i64 - self.q as i64
    }

    /// `p <= q` and `p + q <= n`.
    pub fn is_canonical(&self) -> bool {
        self.p <= self.q && self.p + self.q <= self.n
    }

    /// Maps the triple to the equivalent one with `p <= q` and `p + q <= n`.
    ///
    /// Complements `(p, q) -> (n-p, n-q)` first when `p + q > n`, then swaps
    /// `p` and `q` if needed. Ball volumes are identical at every radius.
    pub fn canonicalize(self) -> Self {
        let mut out = self;
        if out.p + out.q > out.n {
            out = Params { n: out.n, p: out.n - out.p, q: out.n - out.q };
        }
        if out.p > out.q {
            out = Params { n: out.n, p: out.q, q: out.p };
        }
        out
    }

    /// Squared maximal chordal distance, `min(p, q, n-p, n-q)`.
    pub fn max_radius_sq(&self) -> usize {
        self.p.min(self.q).min(self.n - self.p).min(self.n - self.q)
    }

    /// The triple `(n, p, n-q)` used by the complementary-ball identity.
    pub fn complementary(&self) -> Result<Self> {
        Params::new(self.n, self.p, self.n - self.q)
    }

    /// Mean of `d_c^2` under the Haar measure, `p (n - q) / n`.
    pub fn mean_distance_sq(&self) -> f64 {
        let c = self.canonicalize();
        (c.p * (c.n - c.q)) as f64 / c.n as f64
    }

    /// Checks `0 <= r^2 <= d_max^2` and returns `r^2`, clamped onto the range
    /// when it overshoots by rounding only.
    pub fn radius_sq(&self, r: f64) -> Result<f64> {
        let max = self.max_radius_sq() as f64;
        if !r.is_finite() || r < 0.0 {
            return Err(Error::RadiusOutOfRange { r_sq: r * r, max });
        }
        let r_sq = r * r;
        if r_sq > max * (1.0 + RADIUS_SLACK) {
            return Err(Error::RadiusOutOfRange { r_sq, max });
        }
        Ok(r_sq.min(max))
    }

    /// Every canonical triple with ambient dimension in `2..=n_max`.
    pub fn all_canonical(n_max: usize) -> Vec<Params> {
        let mut out = Vec::new();
        for n in 2..=n_max {
            for p in 1..=n / 2 {
                for q in p..=n - p {
                    if q < n {
                        out.push(Params { n, p, q });
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.p, self.q)
    }
}
