//! Exact ball volumes: the Fourier-integral formula, its determinant
//! kernel, and tabulated closed forms.

mod closed_form;
mod determinant;
mod entry;
mod quadrature;

pub use closed_form::{volume_closed_form, ClosedFormVolume, Piece, TABULATED};
pub use determinant::{determinant_dp, determinant_dp_qpn, DeterminantDp, MAX_EXACT_P};
pub use entry::{det_entry, DeterminantEntryParams};
pub use quadrature::{volume_quadrature, ExactVolume, QuadratureConfig, VolumeValue};

use crate::error::Result;
use crate::params::Params;

/// `1 - mu(B_{p, n-q}(sqrt(p - r^2)))`, which equals `mu(B_{p,q}(r))`.
///
/// `inner` receives the complementary triple `(n, p, n-q)` and radius.
pub fn volume_complement<F>(params: Params, r: f64, inner: F) -> Result<f64>
where
    F: FnOnce(Params, f64) -> Result<f64>,
{
    let s = params.radius_sq(r)?;
    let other = params.complementary()?;
    let rest = (params.p() as f64 - s).max(0.0);
    Ok(1.0 - inner(other, rest.sqrt())?)
}
