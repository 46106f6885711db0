//! Scalar rings shared by the numeric and the exact code paths.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A commutative ring with identity. Matrices, determinants and minors are
/// written against this trait so the same cofactor code serves floating
/// complex entries and polynomial-valued entries.
pub trait Ring:
    Clone + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
}

/// A ring containing the imaginary unit and one half, closed under
/// complex conjugation.
pub trait ComplexRing: Ring {
    fn conj(&self) -> Self;
    fn mul_i(&self) -> Self;
    fn half(&self) -> Self;
    /// Real part, as an element of the same ring.
    fn re_part(&self) -> Self;
    /// Imaginary part, as an element of the same ring (a real value).
    fn im_part(&self) -> Self;
}

/// A ring with exact or floating division.
pub trait Field: Ring + Div<Output = Self> {}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}
impl Field for f64 {}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}

impl ComplexRing for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn mul_i(&self) -> Self {
        Complex64::new(-self.im, self.re)
    }
    fn half(&self) -> Self {
        self * 0.5
    }
    fn re_part(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }
    fn im_part(&self) -> Self {
        Complex64::new(self.im, 0.0)
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}
impl Field for BigRational {}
