//! Special functions, quadrature, summation and differentiation kernels.

mod derivative;
mod quadrature;
mod special;
mod summation;

pub use derivative::{derivative_central, Derivative};
pub use quadrature::{
    integrate_interval, integrate_on_partition, integrate_semi_infinite, Partition, QuadratureResult,
    QuadratureSpec,
};
pub use special::{polylog3, zeta3};
pub use summation::{matsubara_sum, matsubara_sum_par, matsubara_sum_par_aux, wynn_epsilon, SummationResult, SummationSpec};

/// Square root with negative rounding residue clamped to zero.
#[inline]
pub(crate) fn guarded_sqrt(x: f64) -> f64 {
    x.max(0.0).sqrt()
}
