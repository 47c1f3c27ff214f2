//! Piecewise-polynomial volumes for six small triples.
//!
//! Each formula is stored as printed: a polynomial in `s = r^2` plus terms
//! `c P(s) (s-k)^e |s-k|^f / |s-k|^g`. On every interval `[k, k+1]` the
//! signs of `s - k` are fixed, so each term collapses to a polynomial and
//! the formula becomes a list of polynomial pieces with rational
//! coefficients. At the breakpoints every kink term vanishes, which is the
//! one-sided limit of the printed expression.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Params;

type Q = BigRational;

fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// `scale * P(s) * (s-k)^e * |s-k|^f / |s-k|^g`.
struct KinkTerm {
    k: i64,
    scale: (i64, i64),
    factor: &'static [(i64, i64)],
    e: u32,
    f: u32,
    g: u32,
}

struct Formula {
    triple: (usize, usize, usize),
    base: &'static [(i64, i64)],
    kinks: &'static [KinkTerm],
}

const ONE: &[(i64, i64)] = &[(1, 1)];

const TABLE: &[Formula] = &[
    Formula {
        triple: (4, 2, 2),
        base: &[(-7, 2), (8, 1), (-6, 1), (2, 1)],
        kinks: &[KinkTerm { k: 1, scale: (-1, 2), factor: &[(7, 1), (-2, 1), (1, 1)], e: 3, f: 0, g: 1 }],
    },
    Formula {
        triple: (5, 2, 2),
        base: &[(17, 2), (-144, 5), (36, 1), (-20, 1), (9, 2)],
        kinks: &[KinkTerm {
            k: 1,
            scale: (-1, 10),
            factor: &[(85, 1), (-33, 1), (6, 1), (2, 1)],
            e: 4,
            f: 0,
            g: 1,
        }],
    },
    Formula {
        triple: (5, 2, 3),
        base: &[(-59, 10), (96, 5), (-24, 1), (16, 1), (-9, 2)],
        kinks: &[KinkTerm {
            k: 1,
            scale: (1, 1),
            factor: &[(59, 10), (-3, 2), (9, 5), (-1, 5)],
            e: 0,
            f: 3,
            g: 0,
        }],
    },
    Formula {
        triple: (6, 2, 2),
        base: &[(-31, 2), (480, 7), (-120, 1), (104, 1), (-45, 1), (8, 1)],
        kinks: &[KinkTerm {
            k: 1,
            scale: (-1, 14),
            factor: &[(217, 1), (-92, 1), (10, 1), (4, 1), (1, 1)],
            e: 5,
            f: 0,
            g: 1,
        }],
    },
    Formula {
        triple: (6, 2, 3),
        base: &[(263, 14), (-576, 7), (144, 1), (-128, 1), (60, 1), (-12, 1)],
        kinks: &[KinkTerm {
            k: 1,
            scale: (-1, 14),
            factor: &[(-263, 1), (100, 1), (-38, 1), (-12, 1), (3, 1)],
            e: 5,
            f: 0,
            g: 1,
        }],
    },
    Formula {
        triple: (6, 3, 3),
        base: &[
            (-6547, 28),
            (19683, 28),
            (-6561, 7),
            (729, 1),
            (-729, 2),
            (243, 2),
            (-27, 1),
            (27, 7),
            (-9, 28),
            (1, 42),
        ],
        kinks: &[
            KinkTerm { k: 1, scale: (6, 1), factor: ONE, e: 7, f: 0, g: 1 },
            KinkTerm { k: 1, scale: (-9, 1), factor: ONE, e: 0, f: 6, g: 1 },
            KinkTerm { k: 1, scale: (-18, 7), factor: ONE, e: 0, f: 8, g: 1 },
            KinkTerm { k: 1, scale: (-1, 28), factor: ONE, e: 0, f: 10, g: 1 },
            KinkTerm { k: 2, scale: (6, 1), factor: ONE, e: 7, f: 0, g: 1 },
            KinkTerm { k: 2, scale: (9, 1), factor: ONE, e: 0, f: 6, g: 1 },
            KinkTerm { k: 2, scale: (18, 7), factor: ONE, e: 0, f: 8, g: 1 },
            KinkTerm { k: 2, scale: (1, 28), factor: ONE, e: 0, f: 10, g: 1 },
        ],
    },
];

/// Canonical triples with a tabulated closed form.
pub const TABULATED: [(usize, usize, usize); 6] =
    [(4, 2, 2), (5, 2, 2), (5, 2, 3), (6, 2, 2), (6, 2, 3), (6, 3, 3)];

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(acc: &mut Vec<Q>, other: &[Q]) {
    if acc.len() < other.len() {
        acc.resize(other.len(), Q::zero());
    }
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

fn poly_pow(base: &[Q], e: u32) -> Vec<Q> {
    let mut out = vec![Q::one()];
    for _ in 0..e {
        out = poly_mul(&out, base);
    }
    out
}

fn horner_exact(coeffs: &[Q], s: &Q) -> Q {
    coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * s + c)
}

/// One polynomial piece on `[lo, hi]` (integer endpoints, in `r^2`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Piece {
    pub lo: u32,
    pub hi: u32,
    /// Coefficients in increasing powers of `r^2`; serialized as `"num/den"` strings.
    #[serde(serialize_with = "serialize_rationals")]
    pub coeffs: Vec<Q>,
    /// Taylor coefficients at `lo`, for well-conditioned float evaluation.
    #[serde(skip)]
    local_f64: Vec<f64>,
}

impl Piece {
    fn new(lo: u32, hi: u32, coeffs: Vec<Q>) -> Self {
        let shift = [Q::from_integer(BigInt::from(lo)), Q::one()];
        let mut local = vec![Q::zero()];
        for c in coeffs.iter().rev() {
            local = poly_mul(&local, &shift);
            local[0] += c;
        }
        let local_f64 = local.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        Piece { lo, hi, coeffs, local_f64 }
    }

    pub fn eval(&self, s: f64) -> f64 {
        let t = s - self.lo as f64;
        self.local_f64.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn eval_exact(&self, s: &Q) -> Q {
        horner_exact(&self.coeffs, s)
    }
}

fn serialize_rationals<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

/// A tabulated piecewise-polynomial volume `r^2 -> mu(B(r))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormVolume {
    pub params: Params,
    pub pieces: Vec<Piece>,
}

impl ClosedFormVolume {
    /// Looks up the canonical form of `params`.
    pub fn lookup(params: Params) -> Result<Self> {
        let c = params.canonicalize();
        let key = (c.n(), c.p(), c.q());
        let formula = TABLE.iter().find(|f| f.triple == key).ok_or(Error::NotTabulated {
            n: params.n(),
            p: params.p(),
            q: params.q(),
        })?;
        let base: Vec<Q> = formula.base.iter().map(|&(a, b)| q(a, b)).collect();
        let top = c.p() as u32;
        let mut pieces = Vec::with_capacity(top as usize);
        for lo in 0..top {
            let mut poly = base.clone();
            for term in formula.kinks {
                // sign of s - k on (lo, lo+1)
                let sign: i64 = if (lo as i64) >= term.k { 1 } else { -1 };
                let shift = [q(-term.k, 1), Q::one()];
                let power = term.e + term.f - term.g;
                let abs_sign = if (term.f + term.g) % 2 == 0 { 1 } else { sign };
                let factor: Vec<Q> = term.factor.iter().map(|&(a, b)| q(a, b)).collect();
                let scale = q(term.scale.0 * abs_sign, term.scale.1);
                let mut piece = poly_mul(&factor, &poly_pow(&shift, power));
                for c in piece.iter_mut() {
                    *c *= &scale;
                }
                poly_add(&mut poly, &piece);
            }
            while poly.len() > 1 && poly.last().is_some_and(|c| c.is_zero()) {
                poly.pop();
            }
            pieces.push(Piece::new(lo, lo + 1, poly));
        }
        Ok(ClosedFormVolume { params: c, pieces })
    }

    fn piece_for(&self, s: f64) -> &Piece {
        let idx = (s.floor().max(0.0) as usize).min(self.pieces.len() - 1);
        &self.pieces[idx]
    }

    /// `mu(B(r))`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        let s = self.params.radius_sq(r)?;
        Ok(self.eval_sq(s))
    }

    /// `mu` as a function of `s = r^2`, for `s` already validated.
    pub fn eval_sq(&self, s: f64) -> f64 {
        self.piece_for(s).eval(s).clamp(0.0, 1.0)
    }

    /// Exact value at a rational `r^2`.
    pub fn eval_exact(&self, r_sq: &Q) -> Result<Q> {
        let max = Q::from_integer(BigInt::from(self.params.max_radius_sq()));
        if r_sq.is_negative() || r_sq > &max {
            return Err(Error::RadiusOutOfRange {
                r_sq: r_sq.to_f64().unwrap_or(f64::NAN),
                max: self.params.max_radius_sq() as f64,
            });
        }
        let idx = r_sq.floor().to_integer().to_usize().unwrap_or(0).min(self.pieces.len() - 1);
        Ok(self.pieces[idx].eval_exact(r_sq))
    }

    /// Largest mismatch between adjacent pieces at shared breakpoints.
    pub fn continuity_defect(&self) -> Q {
        let mut worst = Q::zero();
        for w in self.pieces.windows(2) {
            let s = Q::from_integer(BigInt::from(w[0].hi));
            let d = (w[0].eval_exact(&s) - w[1].eval_exact(&s)).abs();
            if d > worst {
                worst = d;
            }
        }
        worst
    }
}

/// `mu(B(r))` from the tabulated closed forms; [`Error::NotTabulated`] for
/// other triples.
pub fn volume_closed_form(params: Params, r: f64) -> Result<f64> {
    ClosedFormVolume::lookup(params)?.eval(r)
}
