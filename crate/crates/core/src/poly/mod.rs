//! Sparse multivariate polynomials with exact rational coefficients.

mod complex;
mod parse;
mod registry;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use complex::PolyComplex;
pub use registry::{Var, VarRegistry, COMPLEX_PARAMS};

use crate::error::Result;
use crate::scalar::Field;

/// Exponent vector: `(variable, exponent)` pairs sorted by variable, all
/// exponents positive.
pub type Monomial = Vec<(Var, u32)>;

/// A variable assignment `var -> polynomial`.
pub type Bindings = BTreeMap<Var, MPoly>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn mono_degree(m: &Monomial) -> u32 {
    m.iter().map(|&(_, e)| e).sum()
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(rat(1))
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn int(c: i64) -> Self {
        Self::constant(rat(c))
    }

    pub fn var(v: Var) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![(v, 1)], rat(1));
        p
    }

    /// Variable by registry name.
    pub fn named(name: &str) -> Result<Self> {
        Ok(Self::var(Var::named(name)?))
    }

    pub fn parse(src: &str) -> Result<Self> {
        parse::parse_real(src)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(rat(0)),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(mono_degree).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)).max()
    }

    /// Coefficient of `v^d`, as a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: Var, d: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e);
            if e == d {
                out.add_term(m.iter().copied().filter(|&(w, _)| w != v).collect(), c.clone());
            }
        }
        out
    }

    /// Coefficients of `v^0, v^1, ..`, up to the degree in `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Self> {
        match self.degree_in(v) {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.coeff_of(v, k)).collect(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.iter().map(|&(v, _)| v)).collect()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.iter().any(|&(w, _)| w == v))
    }

    /// Replaces each bound variable by its polynomial, simultaneously.
    pub fn substitute(&self, b: &Bindings) -> Self {
        if !self.vars().iter().any(|v| b.contains_key(v)) {
            return self.clone();
        }
        let mut powers: BTreeMap<(Var, u32), Self> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut term = Self::constant(c.clone());
            let mut free: Monomial = Vec::new();
            for &(v, e) in m {
                match b.get(&v) {
                    Some(p) => {
                        let pw = powers.entry((v, e)).or_insert_with(|| p.pow(e));
                        term = &term * &*pw;
                    }
                    None => free.push((v, e)),
                }
            }
            if !free.is_empty() {
                let mut f = Self::zero();
                f.add_term(free, rat(1));
                term = &term * &f;
            }
            out += term;
        }
        out
    }

    pub fn eval_f64(&self, value: &impl Fn(Var) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                c.to_f64().unwrap_or(f64::NAN) * m.iter().map(|&(v, e)| value(v).powi(e as i32)).product::<f64>()
            })
            .sum()
    }

    /// If the polynomial is `c·v + rest` with `c` a nonzero constant and
    /// `rest` free of `v`, returns `(c, rest)`.
    pub fn linear_in(&self, v: Var) -> Option<(BigRational, Self)> {
        if self.degree_in(v) != Some(1) {
            return None;
        }
        let c = self.coeff_of(v, 1).as_constant()?;
        Some((c, self.coeff_of(v, 0)))
    }

    /// Sum of squares `Σ g_j²` of the given generators.
    pub fn sum_of_squares(gs: &[Self]) -> Self {
        gs.iter().fold(Self::zero(), |acc, g| acc + g * g)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| mono_degree(b.0).cmp(&mono_degree(a.0)).then_with(|| a.0.cmp(b.0)));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let body: Vec<String> =
                m.iter().map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") }).collect();
            if m.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&body.join("*"))?;
            } else {
                write!(f, "{mag}*{}", body.join("*"))?;
            }
        }
        Ok(())
    }
}

impl AddAssign for MPoly {
    fn add_assign(&mut self, rhs: Self) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl<'a> AddAssign<&'a MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &'a MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: Self) -> MPoly {
        self += rhs;
        self
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(mut self) -> MPoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -self.clone()
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: Self) -> MPoly {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: Self) -> MPoly {
        &self * &rhs
    }
}

impl crate::scalar::Ring for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::one()
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        MPoly::int(v)
    }
}

/// Division by a nonzero constant polynomial. Division by anything else is
/// a programming error in the caller.
impl std::ops::Div for MPoly {
    type Output = MPoly;
    fn div(self, rhs: Self) -> MPoly {
        let c = rhs.as_constant().filter(|c| !Zero::is_zero(c)).expect("division by a nonzero constant");
        self.scale(&c.recip())
    }
}

impl Field for MPoly {}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        MPoly::parse(s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p("lam + a1") * p("lam - a1"), p("lam^2 - a1^2"));
        let t = Var::named("t").unwrap();
        let d = p("-b1^2*t^2 - 2*a1*b1*t + lam^2 - a1^2");
        assert_eq!(d.coeff_of(t, 2), p("-b1^2"));
        assert_eq!(d.coeff_of(t, 0), p("lam^2 - a1^2"));
        let b = Bindings::from([(Var::named("b2").unwrap(), p("-a2"))]);
        assert_eq!(p("b2").substitute(&b), p("-a2"));
        assert_eq!(p("a1 + 1 - a1").as_constant(), Some(rat(1)));
    }

    #[test]
    fn no_zero_coefficients_are_stored() {
        let q = p("a1*t + b1") - p("a1*t");
        assert_eq!(q.len(), 1);
        assert!((p("a1") - p("a1")).is_zero());
        assert_eq!(p("2*a1") * MPoly::zero(), MPoly::zero());
    }

    #[test]
    fn substitution_is_simultaneous() {
        let a = Var::named("a1").unwrap();
        let b = Var::named("b1").unwrap();
        let swap = Bindings::from([(a, MPoly::var(b)), (b, MPoly::var(a))]);
        assert_eq!(p("a1 - 2*b1^2").substitute(&swap), p("b1 - 2*a1^2"));
    }

    #[test]
    fn linear_solving_and_display() {
        let v = Var::named("b8").unwrap();
        let (c, rest) = p("a1 + b8").linear_in(v).unwrap();
        assert_eq!(c, rat(1));
        assert_eq!(rest, p("a1"));
        assert!(p("b8^2").linear_in(v).is_none());
        assert_eq!(p("-b1^2*t^2 - 2*a1*b1*t + lam^2 - a1^2").to_string(), "-b1^2*t^2 - 2*a1*b1*t + λ^2 - a1^2");
        assert_eq!(p("im_beta/3").to_string(), "1/3*Im(β)");
    }
}
