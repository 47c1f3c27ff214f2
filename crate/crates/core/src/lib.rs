//! Volumes of metric balls in complex Grassmann manifolds.
//!
//! A ball `B_{P,q}(r)` holds the `q`-dimensional subspaces of `C^n` within
//! chordal distance `r` of a `p`-dimensional center. Its normalized Haar
//! volume is available exactly ([`exact`]), through Gaussian surrogates
//! ([`asymptotic`]) and by simulation ([`monte_carlo`]); [`coding`] turns
//! volumes into packing bounds and distortion-rate estimates.

pub mod asymptotic;
pub mod coding;
pub mod curve;
pub mod error;
pub mod exact;
pub mod grassmann;
pub mod monte_carlo;
pub mod params;
pub mod rng;
pub mod special;
pub mod volume;

pub use error::{Error, Result};
pub use grassmann::{
    chordal_distance_sq, grassmannian_log_volume, grassmannian_volume, orthogonal_complement,
    principal_angles, sample_haar, DistanceVariant, PrincipalAngles, SubspaceBasis,
};
pub use params::Params;
pub use volume::{volume, VolumeMethod};
