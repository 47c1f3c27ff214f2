//! Principal angles, chordal distances and orthogonal complements.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::SubspaceBasis;
use crate::error::{Error, Result};

/// Principal angles `0 <= theta_1 <= ... <= theta_m <= pi/2`, `m = min(p, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAngles {
    angles: Vec<f64>,
    cosines: Vec<f64>,
}

impl PrincipalAngles {
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Singular values of `P^H Q` after clamping to `[0, 1]`, descending.
    pub fn cosines(&self) -> &[f64] {
        &self.cosines
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// `sum cos^2 theta_i = |P^H Q|_F^2`.
    pub fn cos_sq_sum(&self) -> f64 {
        self.cosines.iter().map(|c| c * c).sum()
    }

    /// `sum sin^2 theta_i`, the squared chordal distance `d_c^2`.
    pub fn sin_sq_sum(&self) -> f64 {
        self.cosines.iter().map(|c| (1.0 - c) * (1.0 + c)).sum()
    }
}

/// Principal angles between `span(p)` and `span(q)` via the SVD of `P^H Q`.
pub fn principal_angles(p: &SubspaceBasis, q: &SubspaceBasis) -> Result<PrincipalAngles> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch { left: p.n(), right: q.n() });
    }
    let cross = p.matrix().adjoint() * q.matrix();
    let mut cosines: Vec<f64> = cross
        .singular_values()
        .iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect();
    cosines.sort_by(|a, b| b.total_cmp(a));
    let angles = cosines.iter().map(|c| c.acos()).collect();
    Ok(PrincipalAngles { angles, cosines })
}

/// Generalizations of the chordal distance to subspaces of unequal dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceVariant {
    /// `min(p,q) - |P^H Q|_F^2`: sum of `sin^2` over the `min(p,q)` angles.
    Dc,
    /// `max(p,q) - |P^H Q|_F^2`: pads `|p-q|` right angles, a proper metric.
    DcSharp,
    /// `|P P^H - Q Q^H|_F^2 = p + q - 2 |P^H Q|_F^2`.
    DcStar,
    /// Distance between detraced, rescaled projectors on a common sphere:
    /// `K1 - K2 |P^H Q|_F^2`.
    DcFivepointed,
}

impl DistanceVariant {
    pub const ALL: [DistanceVariant; 4] = [
        DistanceVariant::Dc,
        DistanceVariant::DcSharp,
        DistanceVariant::DcStar,
        DistanceVariant::DcFivepointed,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DistanceVariant::Dc => "dc",
            DistanceVariant::DcSharp => "dc_sharp",
            DistanceVariant::DcStar => "dc_star",
            DistanceVariant::DcFivepointed => "dc_fivepointed",
        }
    }

    /// Squared distance from `sum cos^2 theta` and the dimensions.
    pub fn from_cos_sq_sum(&self, cos_sq: f64, n: usize, p: usize, q: usize) -> Result<f64> {
        let (pf, qf) = (p as f64, q as f64);
        let d = match self {
            DistanceVariant::Dc => pf.min(qf) - cos_sq,
            DistanceVariant::DcSharp => pf.max(qf) - cos_sq,
            DistanceVariant::DcStar => pf + qf - 2.0 * cos_sq,
            DistanceVariant::DcFivepointed => {
                if p >= n || q >= n {
                    return Err(Error::UndefinedConstant(self.name()));
                }
                let (k1, k2) = fivepointed_constants(n, p, q);
                k1 - k2 * cos_sq
            }
        };
        Ok(d.max(0.0))
    }
}

/// `(K1, K2)` of the single-sphere embedding.
pub fn fivepointed_constants(n: usize, p: usize, q: usize) -> (f64, f64) {
    let (n, p, q) = (n as f64, p as f64, q as f64);
    let k1 = 2.0 + 2.0 * (p * q / ((n - p) * (n - q))).sqrt();
    let k2 = 2.0 * n / (p * q * (n - p) * (n - q)).sqrt();
    (k1, k2)
}

impl fmt::Display for DistanceVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DistanceVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown distance variant `{s}`")))
    }
}

/// Squared distance between `span(p)` and `span(q)`.
///
/// All variants are computed from the same clamped singular values.
pub fn chordal_distance_sq(
    p: &SubspaceBasis,
    q: &SubspaceBasis,
    variant: DistanceVariant,
) -> Result<f64> {
    let angles = principal_angles(p, q)?;
    let n = p.n();
    if variant == DistanceVariant::Dc {
        return Ok(angles.sin_sq_sum());
    }
    variant.from_cos_sq_sum(angles.cos_sq_sum(), n, p.k(), q.k())
}

/// Orthonormal basis of the orthogonal complement of `span(p)`.
pub fn orthogonal_complement(p: &SubspaceBasis) -> Result<SubspaceBasis> {
    let (n, k) = (p.n(), p.k());
    if k >= n {
        return Err(Error::EmptyComplement(n));
    }
    // eigenvectors of I - P P^H with eigenvalue 1
    let mut residual = DMatrix::<Complex64>::identity(n, n) - p.projector();
    residual = (&residual + residual.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = residual.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let cols: Vec<_> = order[..n - k].iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    let mut out = DMatrix::from_columns(&cols);
    // one projection sweep to push P^H P_perp down to rounding level
    let leak = p.matrix().adjoint() * &out;
    out -= p.matrix() * leak;
    let q = out.qr().q();
    SubspaceBasis::new(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::haar::sample_haar;
    use std::f64::consts::FRAC_PI_2;

    fn basis(n: usize, coords: &[usize]) -> SubspaceBasis {
        SubspaceBasis::coordinate(n, coords).unwrap()
    }

    #[test]
    fn identical_subspaces_have_zero_angles() {
        let p = sample_haar(5, 2, 3).unwrap();
        let a = principal_angles(&p, &p).unwrap();
        assert_eq!(a.len(), 2);
        assert!(a.angles().iter().all(|&t| t.abs() < 1e-7));
        assert!(chordal_distance_sq(&p, &p, DistanceVariant::Dc).unwrap() < 1e-14);
    }

    #[test]
    fn orthogonal_coordinate_planes() {
        let a = principal_angles(&basis(4, &[0, 1]), &basis(4, &[2, 3])).unwrap();
        assert_eq!(a.angles(), &[FRAC_PI_2, FRAC_PI_2]);
        let d = chordal_distance_sq(&basis(4, &[0, 1]), &basis(4, &[2, 3]), DistanceVariant::Dc);
        assert_eq!(d.unwrap(), 2.0);
    }

    #[test]
    fn one_shared_direction() {
        let a = principal_angles(&basis(4, &[0, 1]), &basis(4, &[0, 2])).unwrap();
        assert!(a.angles()[0].abs() < 1e-15);
        assert!((a.angles()[1] - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn nested_subspaces_of_different_dimension() {
        let p = basis(4, &[1]);
        let q = basis(4, &[1, 3]);
        assert_eq!(chordal_distance_sq(&p, &q, DistanceVariant::Dc).unwrap(), 0.0);
        assert_eq!(chordal_distance_sq(&p, &q, DistanceVariant::DcSharp).unwrap(), 1.0);
        assert_eq!(chordal_distance_sq(&p, &q, DistanceVariant::DcStar).unwrap(), 1.0);
    }

    #[test]
    fn fivepointed_needs_proper_subspaces() {
        let full = SubspaceBasis::leading(3, 3).unwrap();
        let line = basis(3, &[0]);
        assert_eq!(
            chordal_distance_sq(&full, &line, DistanceVariant::DcFivepointed),
            Err(Error::UndefinedConstant("dc_fivepointed"))
        );
        assert!(chordal_distance_sq(&full, &line, DistanceVariant::Dc).is_ok());
    }

    #[test]
    fn variants_collapse_for_equal_dimensions() {
        for seed in 0..20 {
            let p = sample_haar(6, 3, seed).unwrap();
            let q = sample_haar(6, 3, seed + 100).unwrap();
            let dc = chordal_distance_sq(&p, &q, DistanceVariant::Dc).unwrap();
            let sharp = chordal_distance_sq(&p, &q, DistanceVariant::DcSharp).unwrap();
            let star = chordal_distance_sq(&p, &q, DistanceVariant::DcStar).unwrap();
            let five = chordal_distance_sq(&p, &q, DistanceVariant::DcFivepointed).unwrap();
            let (_, k2) = fivepointed_constants(6, 3, 3);
            assert!((sharp - dc).abs() < 1e-12);
            assert!((star - 2.0 * dc).abs() < 1e-12);
            assert!((five - k2 * dc).abs() < 1e-11);
        }
    }

    #[test]
    fn star_variant_matches_projector_difference() {
        let p = sample_haar(5, 2, 1).unwrap();
        let q = sample_haar(5, 3, 2).unwrap();
        let diff = p.projector() - q.projector();
        let direct: f64 = diff.iter().map(|z| z.norm_sqr()).sum();
        let via_angles = chordal_distance_sq(&p, &q, DistanceVariant::DcStar).unwrap();
        assert!((direct - via_angles).abs() < 1e-12);
    }

    #[test]
    fn fivepointed_matches_detraced_projectors() {
        let (n, pk, qk) = (6usize, 2usize, 3usize);
        let p = sample_haar(n, pk, 11).unwrap();
        let q = sample_haar(n, qk, 12).unwrap();
        let eye = DMatrix::<Complex64>::identity(n, n);
        let scaled = |b: &SubspaceBasis, k: usize| {
            let s = (n as f64 / (k * (n - k)) as f64).sqrt();
            (b.projector() - &eye * Complex64::new(k as f64 / n as f64, 0.0)) * Complex64::new(s, 0.0)
        };
        let diff = scaled(&p, pk) - scaled(&q, qk);
        let direct: f64 = diff.iter().map(|z| z.norm_sqr()).sum();
        let via = chordal_distance_sq(&p, &q, DistanceVariant::DcFivepointed).unwrap();
        assert!((direct - via).abs() < 1e-11, "{direct} vs {via}");
    }

    #[test]
    fn dimension_mismatch() {
        let p = basis(3, &[0]);
        let q = basis(4, &[0]);
        assert!(matches!(principal_angles(&p, &q), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn complement_of_coordinate_plane() {
        let p = basis(4, &[0, 1]);
        let c = orthogonal_complement(&p).unwrap();
        assert_eq!(c.k(), 2);
        let cross = p.matrix().adjoint() * c.matrix();
        assert!(cross.iter().all(|z| z.norm() <= 1e-12));
        let d = chordal_distance_sq(&c, &basis(4, &[2, 3]), DistanceVariant::Dc).unwrap();
        assert!(d < 1e-12);
    }

    #[test]
    fn complement_of_full_space_is_empty() {
        let full = SubspaceBasis::leading(3, 3).unwrap();
        assert_eq!(orthogonal_complement(&full), Err(Error::EmptyComplement(3)));
    }

    #[test]
    fn complement_identity_for_random_pairs() {
        for seed in 0..100 {
            let p = sample_haar(5, 2, seed).unwrap();
            let q = sample_haar(5, 3, 1000 + seed).unwrap();
            let qc = orthogonal_complement(&q).unwrap();
            let lhs = chordal_distance_sq(&p, &q, DistanceVariant::Dc).unwrap()
                + chordal_distance_sq(&p, &qc, DistanceVariant::Dc).unwrap();
            assert!((lhs - 2.0).abs() <= 1e-10, "seed {seed}: {lhs}");
            let cross = p.matrix().adjoint() * orthogonal_complement(&p).unwrap().matrix();
            assert!(cross.iter().all(|z| z.norm() <= 1e-12));
        }
    }

    #[test]
    fn variant_names_round_trip() {
        for v in DistanceVariant::ALL {
            assert_eq!(v.name().parse::<DistanceVariant>().unwrap(), v);
        }
        assert!("geodesic".parse::<DistanceVariant>().is_err());
    }
}
