use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::{parse, rat, Bindings, MPoly};
use crate::error::Result;
use crate::scalar::{ComplexRing, Ring};

/// A complex value `re + i·im` with real polynomial parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyComplex {
    pub re: MPoly,
    pub im: MPoly,
}

impl PolyComplex {
    pub fn new(re: MPoly, im: MPoly) -> Self {
        Self { re, im }
    }

    pub fn real(re: MPoly) -> Self {
        Self { re, im: MPoly::zero() }
    }

    pub fn imag(im: MPoly) -> Self {
        Self { re: MPoly::zero(), im }
    }

    pub fn int(v: i64) -> Self {
        Self::real(MPoly::int(v))
    }

    pub fn i() -> Self {
        Self::imag(MPoly::one())
    }

    /// Parses expressions such as `-lam + b1*i` or `conj(alpha)`; complex
    /// parameter names expand to `re_* + i·im_*`.
    pub fn parse(src: &str) -> Result<Self> {
        parse::parse_complex(src)
    }

    /// `|z|² = re² + im²`.
    pub fn norm_sqr(&self) -> MPoly {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn substitute(&self, b: &Bindings) -> Self {
        Self { re: self.re.substitute(b), im: self.im.substitute(b) }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { re: self.re.scale(c), im: self.im.scale(c) }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl fmt::Display for PolyComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "({})*i", self.im),
            (false, false) => write!(f, "{} + ({})*i", self.re, self.im),
        }
    }
}

impl Add for PolyComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for PolyComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for PolyComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl<'a> Mul<&'a PolyComplex> for &'a PolyComplex {
    type Output = PolyComplex;
    fn mul(self, rhs: &PolyComplex) -> PolyComplex {
        PolyComplex {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Mul for PolyComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Ring for PolyComplex {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::int(1)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        Self::int(v)
    }
}

impl ComplexRing for PolyComplex {
    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }
    fn mul_i(&self) -> Self {
        Self { re: -self.im.clone(), im: self.re.clone() }
    }
    fn half(&self) -> Self {
        let h = rat(1) / rat(2);
        self.scale(&h)
    }
    fn re_part(&self) -> Self {
        Self::real(self.re.clone())
    }
    fn im_part(&self) -> Self {
        Self::real(self.im.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parameters_expand() {
        let a = PolyComplex::parse("alpha1").unwrap();
        assert_eq!(a.re, MPoly::parse("re_alpha1").unwrap());
        assert_eq!(a.im, MPoly::parse("im_alpha1").unwrap());
        let n = PolyComplex::parse("alpha1*conj(alpha1)").unwrap();
        assert_eq!(n, PolyComplex::real(a.norm_sqr()));
        assert_eq!(PolyComplex::parse("i*i").unwrap(), PolyComplex::int(-1));
        assert_eq!(PolyComplex::int(3).mul_i().mul_i(), PolyComplex::int(-3));
    }
}
