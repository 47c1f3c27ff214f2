//! Large-dimension approximations of ball volumes through the linear
//! statistic `Y = d_c^2 - p/2`.

mod approx;
mod cumulants;

pub use approx::{
    hellinger_gaussians, hellinger_sweep, volume_finite, volume_rmt, GaussianSurrogate, HellingerRow,
    SurrogateKind,
};
pub use cumulants::{cumulants_closed, cumulants_recursive, cumulants_series, Cumulants, MAX_CUMULANT_ORDER};
