//! Points of complex Grassmann manifolds and the distances between them.

mod basis;
mod distance;
pub mod embedding;
mod haar;
mod measure;

pub use basis::{SubspaceBasis, SEMI_UNITARY_TOL};
pub use distance::{
    chordal_distance_sq, fivepointed_constants, orthogonal_complement, principal_angles,
    DistanceVariant, PrincipalAngles,
};
pub(crate) use haar::fill_haar_columns;
pub use haar::{sample_haar, sample_haar_with};
pub use measure::{grassmannian_log_volume, grassmannian_volume};
