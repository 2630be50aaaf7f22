//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
///
/// The associated tolerances are the defaults used for symmetry checks and
/// numerical rank decisions; both scale with the precision of the type.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Largest tolerated absolute asymmetry `|a_ij - a_ji|`.
    fn sym_tol() -> Self;

    /// Default relative cutoff below which eigenvalues count as zero.
    fn rank_tol() -> Self;

    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in target float type")
    }
}

impl Real for f64 {
    fn sym_tol() -> Self {
        1e-12
    }

    fn rank_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn sym_tol() -> Self {
        1e-5
    }

    fn rank_tol() -> Self {
        1e-5
    }
}
