//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_traits::FromPrimitive;

/// Real floating-point scalar usable by the closed forms, the dense
/// operators and the oracle.
///
/// Implemented for `f32` and `f64`. Tolerances are written in `f64` and
/// widened through [`Real::slack`] so that the same code paths stay
/// meaningful in single precision.
pub trait Real: RealField + Copy + FromPrimitive + Display + Debug + Send + Sync + 'static {
    const INFINITY: Self;
    const EPSILON: Self;

    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self;

    fn as_f64(self) -> f64;

    /// `base` widened to a few hundred ulps of the working precision.
    fn slack(base: f64) -> Self {
        let floor = 256.0 * Self::EPSILON.as_f64();
        Self::lit(base.max(floor))
    }

    fn is_finite_value(self) -> bool {
        self.as_f64().is_finite()
    }
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            const INFINITY: Self = <$t>::INFINITY;
            const EPSILON: Self = <$t>::EPSILON;

            #[inline]
            fn lit(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// `p ln(p / q)` with `0 ln(0/q) = 0` and `p ln(p/0) = +inf` for `p > 0`.
pub fn xlogx_over<T: Real>(p: T, q: T) -> T {
    if p <= T::zero() {
        T::zero()
    } else if q <= T::zero() {
        T::INFINITY
    } else {
        p * (p / q).ln()
    }
}

/// `p ln p` with `0 ln 0 = 0`.
pub fn xlogx<T: Real>(p: T) -> T {
    if p <= T::zero() {
        T::zero()
    } else {
        p * p.ln()
    }
}
