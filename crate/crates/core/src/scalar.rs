//! Scalar traits the algebra and the analysis routines are generic over.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Coefficient ring of a Clifford number.
///
/// Only ring operations and division are required, so exact types such as
/// `num_rational::Ratio<i64>` work alongside `f32`/`f64`.
pub trait Scalar: Copy + Num + Neg<Output = Self> + PartialOrd + Debug {
    /// `false` for NaN/Inf; always `true` for exact types.
    fn is_finite_value(&self) -> bool;
}

macro_rules! float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            #[inline]
            fn is_finite_value(&self) -> bool {
                self.is_finite()
            }
        }
    )*};
}
float_scalar!(f32, f64);

macro_rules! exact_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            #[inline]
            fn is_finite_value(&self) -> bool {
                true
            }
        }
    )*};
}
exact_scalar!(i32, i64, i128);

impl<I> Scalar for num_rational::Ratio<I>
where
    I: Copy + num_integer::Integer + Neg<Output = I> + Debug,
{
    #[inline]
    fn is_finite_value(&self) -> bool {
        true
    }
}

/// Real scalars used by the grid, quadrature and norm machinery.
pub trait Real:
    Scalar
    + Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + Display
    + LowerExp
    + serde::Serialize
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in the scalar type")
}

/// Lossy conversion to `f64` for reporting.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
