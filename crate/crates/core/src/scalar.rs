//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point type the library is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Converts a count into this type.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Integer-proximity tolerance used for pole and genericity checks.
pub const DEFAULT_DELTA: f64 = 1e-8;

pub(crate) fn default_delta<T: Real>() -> T {
    T::lit(DEFAULT_DELTA)
}

/// `true` when `w` lies within `delta` of an integer, both in the imaginary
/// part and in the distance of the real part to the nearest integer.
pub fn is_near_integer<T: Real>(w: Complex<T>, delta: T) -> bool {
    w.im.abs() < delta && (w.re - w.re.round()).abs() < delta
}

/// `true` when `w` lies within `delta` of `{0, -1, -2, ...}`.
pub fn is_near_nonpositive_integer<T: Real>(w: Complex<T>, delta: T) -> bool {
    is_near_integer(w, delta) && w.re.round() <= T::zero()
}

pub(crate) fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

pub(crate) fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

/// `|lhs - rhs| / max(|lhs|, |rhs|, floor)`.
pub fn relative_residual<T: Real>(lhs: Complex<T>, rhs: Complex<T>) -> T {
    let floor = T::min_positive_value().max(T::lit(1e-300));
    (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(floor)
}
