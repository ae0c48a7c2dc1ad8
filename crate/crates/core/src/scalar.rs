//! Coefficient rings for fiber computations.
//!
//! Identity suites run over exact rationals, spectral and sphere work over
//! `f64`. Ambient polynomial forms reuse the same blade machinery with
//! [`crate::sphere::Poly`] coefficients, so the base trait only asks for a
//! commutative ring.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational scalar used by the identity suites.
pub type Rational = num_rational::BigRational;

/// Commutative ring with unit.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;
}

/// A ring where division by nonzero integers is available.
pub trait Field: Scalar + Div<Output = Self> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }
}

/// Lossy conversion used when exact data feeds a floating-point stage.
pub trait ToF64 {
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Field for f64 {}

impl ToF64 for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
}

impl Field for Rational {
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl ToF64 for Rational {
    fn to_f64(&self) -> f64 {
        // numer/denom separately would overflow for large values
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Shorthand for building exact rationals in tests and suites.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// `(-1)^k` in any scalar ring.
pub fn sign_pow<S: Scalar>(k: usize) -> S {
    if k % 2 == 0 {
        S::one()
    } else {
        -S::one()
    }
}
