//! Scalar abstraction so the linear algebra runs on `f32` or `f64`.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real field the library is generic over.
///
/// All thresholds in the crate are written as `f64` literals tuned for double
/// precision and passed through [`Real::tol`], which widens them for types
/// with a coarser machine epsilon.
pub trait Real:
    'static
    + Copy
    + Send
    + Sync
    + Default
    + Debug
    + Display
    + LowerExp
    + Float
    + FloatConst
    + FromPrimitive
    + NumAssign
{
    /// Factor applied to double-precision tolerances.
    const TOL_SCALE: f64;

    /// Converts an `f64` constant into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must be representable")
    }

    /// A double-precision tolerance rescaled for this type.
    #[inline]
    fn tol(base: f64) -> Self {
        Self::lit(base * Self::TOL_SCALE)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const TOL_SCALE: f64 = 1.0;
}

impl Real for f32 {
    // 1e-10 becomes 1e-4
    const TOL_SCALE: f64 = 1.0e6;
}

/// Complex scalar over [`Real`].
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// Unit-modulus phase factor `e^{i theta}`.
#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Argument folded into `(-pi, pi]`.
pub fn principal_arg<T: Real>(z: C<T>) -> T {
    let a = z.im.atan2(z.re);
    if a <= -T::PI() {
        a + T::PI() + T::PI()
    } else {
        a
    }
}
