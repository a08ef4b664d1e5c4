//! Scalar abstractions.
//!
//! Straight-line programs, the monomial oracle and the polynomial builders only
//! need ring/field arithmetic and work over any [`Scalar`], including exact
//! rationals. Cone geometry, barriers and the interior-point method need a real
//! field with square roots and logarithms and are written against [`Real`].

use std::fmt::Debug;

use nalgebra::RealField;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Field scalar usable for polynomial evaluation and differentiation.
pub trait Scalar:
    Clone + PartialEq + Debug + Num + std::ops::Neg<Output = Self> + Send + Sync + 'static
{
    /// Finite (not NaN/Inf) value. Exact types are always finite.
    fn is_finite_value(&self) -> bool;

    /// Conversion from a double literal. Exact types convert the binary value exactly.
    fn from_f64_lossy(x: f64) -> Self;

    /// Conversion to a double, for reporting and tolerance checks.
    fn to_f64_lossy(&self) -> f64;

    fn from_usize(n: usize) -> Self {
        Self::from_f64_lossy(n as f64)
    }

    fn abs_value(&self) -> Self {
        if self.to_f64_lossy() < 0.0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    #[inline]
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    #[inline]
    fn from_f64_lossy(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
    #[inline]
    fn abs_value(&self) -> Self {
        self.abs()
    }
}

impl Scalar for f32 {
    #[inline]
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    #[inline]
    fn from_f64_lossy(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn to_f64_lossy(&self) -> f64 {
        *self as f64
    }
    #[inline]
    fn abs_value(&self) -> Self {
        self.abs()
    }
}

impl Scalar for BigRational {
    fn is_finite_value(&self) -> bool {
        true
    }
    fn from_f64_lossy(x: f64) -> Self {
        BigRational::from_f64(x).expect("finite literal")
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn from_usize(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Real scalar for the numerical layers (f32 or f64).
pub trait Real: Scalar + RealField + Copy + FromPrimitive + ToPrimitive {}

impl<T: Scalar + RealField + Copy + FromPrimitive + ToPrimitive> Real for T {}

/// Literal conversion for generic numeric code.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64_lossy(x)
}

/// Machine epsilon of a real scalar.
#[inline]
pub fn eps<T: Real>() -> T {
    T::default_epsilon()
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn norm2<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}
