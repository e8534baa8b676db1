//! Scalar abstractions.
//!
//! Everything numeric in the crate is generic over [`Real`] (`f32` or `f64`).
//! Frame fields are additionally generic over [`Scalar`], which is implemented
//! by the plain real type and by the forward-mode jets in [`crate::jet`], so a
//! single frame definition yields values, gradients and Hessians.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the library computes in.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for `T::lit`.
#[inline]
pub fn lit<T: Real>(v: f64) -> T {
    T::lit(v)
}

/// A number a frame field can be evaluated on: a plain real or a jet over one.
pub trait Scalar<T: Real>:
    Copy
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(v: T) -> Self;

    fn value(&self) -> T;

    fn scale(self, k: T) -> Self;

    /// Applies a scalar function `φ` to `self`, given `φ`, `φ'` and `φ''`
    /// evaluated at `self.value()`.
    fn chain(self, f0: T, f1: T, f2: T) -> Self;

    #[inline]
    fn zero() -> Self {
        Self::cst(T::zero())
    }

    #[inline]
    fn sin(self) -> Self {
        let v = self.value();
        let (s, c) = v.sin_cos();
        self.chain(s, c, -s)
    }

    #[inline]
    fn cos(self) -> Self {
        let v = self.value();
        let (s, c) = v.sin_cos();
        self.chain(c, -s, -c)
    }

    #[inline]
    fn sqrt(self) -> Self {
        let v = self.value();
        let s = v.sqrt();
        let half = lit::<T>(0.5);
        self.chain(s, half / s, -half * half / (s * v))
    }

    #[inline]
    fn recip(self) -> Self {
        let v = self.value();
        let r = v.recip();
        self.chain(r, -r * r, lit::<T>(2.0) * r * r * r)
    }

    #[inline]
    fn sq(self) -> Self {
        self * self
    }

    #[inline]
    fn add_c(self, c: T) -> Self {
        self + Self::cst(c)
    }
}

impl<T: Real> Scalar<T> for T {
    #[inline]
    fn cst(v: T) -> Self {
        v
    }
    #[inline]
    fn value(&self) -> T {
        *self
    }
    #[inline]
    fn scale(self, k: T) -> Self {
        self * k
    }
    #[inline]
    fn chain(self, f0: T, _f1: T, _f2: T) -> Self {
        f0
    }
    #[inline]
    fn sin(self) -> Self {
        Float::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        Float::cos(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        Float::sqrt(self)
    }
    #[inline]
    fn recip(self) -> Self {
        Float::recip(self)
    }
}
