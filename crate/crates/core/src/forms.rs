//! Real biquadratic forms `B(x, y) = Σ c_ijkl x_i x_j y_k y_l` and their
//! correspondence with maps on symmetric matrices, `B_m(x, y) = yᵗ m(x xᵗ) y`.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::SymmetricRestriction;
use crate::matrix::Matrix;
use crate::scalar::Field;

/// Canonical monomial index `(i, j, k, l)` with `i <= j`, `k <= l`, 0-based.
pub type Monomial = (usize, usize, usize, usize);

/// A biquadratic form with one coefficient per canonical monomial
/// `x_i x_j y_k y_l`; the symmetric multiplicities are folded into the value.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct BiquadraticForm<T> {
    n: usize,
    coeffs: BTreeMap<Monomial, T>,
}

fn canonical(i: usize, j: usize, k: usize, l: usize) -> Monomial {
    (i.min(j), i.max(j), k.min(l), k.max(l))
}

impl<T: Field> BiquadraticForm<T> {
    pub fn zero(n: usize) -> Self {
        Self { n, coeffs: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.coeffs.iter()
    }

    /// Coefficient of `x_i x_j y_k y_l` (any index order, 0-based).
    pub fn coeff(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        self.coeffs.get(&canonical(i, j, k, l)).cloned().unwrap_or_else(T::zero)
    }

    /// Adds `c` to the coefficient of `x_i x_j y_k y_l`.
    pub fn add_term(&mut self, i: usize, j: usize, k: usize, l: usize, c: T) -> Result<()> {
        if let Some(&bad) = [i, j, k, l].iter().find(|&&v| v >= self.n) {
            return Err(Error::IndexOutOfRange { index: bad + 1, n: self.n });
        }
        let key = canonical(i, j, k, l);
        let sum = self.coeffs.remove(&key).unwrap_or_else(T::zero) + c;
        if !sum.is_zero() {
            self.coeffs.insert(key, sum);
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[T], y: &[T]) -> Result<T> {
        for v in [x, y] {
            if v.len() != self.n {
                return Err(Error::Dimension { expected: self.n, found: v.len() });
            }
        }
        Ok(self.coeffs.iter().fold(T::zero(), |acc, (&(i, j, k, l), c)| {
            acc + c.clone() * x[i].clone() * x[j].clone() * y[k].clone() * y[l].clone()
        }))
    }

    /// `B_m(x, y) = yᵗ m(x xᵗ) y`.
    pub fn from_map(m: &SymmetricRestriction<T>) -> Self {
        let n = m.dim();
        let mut form = Self::zero(n);
        let mut absorb = |i: usize, j: usize, img: &Matrix<T>| {
            for k in 0..n {
                for l in k..n {
                    let c = if k == l { img[(k, k)].clone() } else { img[(k, l)].clone() + img[(l, k)].clone() };
                    form.add_term(i, j, k, l, c).expect("indices within n");
                }
            }
        };
        for i in 0..n {
            absorb(i, i, m.diag_image(i));
            for j in i + 1..n {
                absorb(i, j, m.sym_image(i, j));
            }
        }
        form
    }

    /// Symmetric matrix `S(x)` of the quadratic form `y ↦ B(x, y)`.
    pub fn quadratic_matrix(&self, x: &[T]) -> Result<Matrix<T>> {
        if x.len() != self.n {
            return Err(Error::Dimension { expected: self.n, found: x.len() });
        }
        let two = T::from_i64(2);
        let mut s = Matrix::<T>::zeros(self.n);
        for (&(i, j, k, l), c) in &self.coeffs {
            let w = c.clone() * x[i].clone() * x[j].clone();
            if k == l {
                s[(k, k)] = s[(k, k)].clone() + w;
            } else {
                let h = w / two.clone();
                s[(k, l)] = s[(k, l)].clone() + h.clone();
                s[(l, k)] = s[(l, k)].clone() + h;
            }
        }
        Ok(s)
    }

    /// Recovers the map by polarization: `m(E_kk) = S(e_k)` and
    /// `m(S_kl) = S(e_k + e_l) - S(e_k) - S(e_l)`.
    pub fn to_map(&self) -> SymmetricRestriction<T> {
        let n = self.n;
        let e =
            |idx: &[usize]| -> Vec<T> { (0..n).map(|r| if idx.contains(&r) { T::one() } else { T::zero() }).collect() };
        let s = |idx: &[usize]| self.quadratic_matrix(&e(idx)).expect("length n");
        let mut images: Vec<Matrix<T>> = (0..n).map(|k| s(&[k])).collect();
        for k in 0..n {
            for l in k + 1..n {
                let both = s(&[k, l]);
                images.push(
                    both.zip_with(&images[k], |a, b| a.clone() - b.clone())
                        .zip_with(&images[l], |a, b| a.clone() - b.clone()),
                );
            }
        }
        SymmetricRestriction::new(n, images).expect("quadratic matrices are symmetric")
    }
}

impl BiquadraticForm<BigRational> {
    pub fn to_f64(&self) -> BiquadraticForm<f64> {
        let coeffs = self.coeffs.iter().map(|(&m, c)| (m, c.to_f64().unwrap_or(f64::NAN))).collect();
        BiquadraticForm { n: self.n, coeffs }
    }
}

/// `B(x, y)` for `yᵗ m(x xᵗ) y` over a symmetric restriction.
pub fn form_from_map<T: Field>(m: &SymmetricRestriction<T>) -> BiquadraticForm<T> {
    BiquadraticForm::from_map(m)
}

pub fn map_from_form<T: Field>(b: &BiquadraticForm<T>) -> SymmetricRestriction<T> {
    b.to_map()
}

/// The form of the Choi map,
/// `(x1²+x3²)y1² + (x2²+x1²)y2² + (x3²+x2²)y3² - 2(x1x2y1y2 + x2x3y2y3 + x3x1y3y1)`.
pub fn choi_form<T: Field>() -> BiquadraticForm<T> {
    let mut b = BiquadraticForm::zero(3);
    for (i, j, k, l, c) in [
        (0, 0, 0, 0, 1),
        (2, 2, 0, 0, 1),
        (1, 1, 1, 1, 1),
        (0, 0, 1, 1, 1),
        (2, 2, 2, 2, 1),
        (1, 1, 2, 2, 1),
        (0, 1, 0, 1, -2),
        (1, 2, 1, 2, -2),
        (0, 2, 0, 2, -2),
    ] {
        b.add_term(i, j, k, l, T::from_i64(c)).expect("n = 3");
    }
    b
}

/// JSON term with 1-based canonical indices.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FormTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub c: f64,
}

/// `{"n": 3, "terms": [{"i": 1, "j": 1, "k": 1, "l": 1, "c": 1.0}, ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FormSpec {
    pub n: usize,
    pub terms: Vec<FormTerm>,
}

impl From<&BiquadraticForm<f64>> for FormSpec {
    fn from(b: &BiquadraticForm<f64>) -> Self {
        let terms =
            b.terms().map(|(&(i, j, k, l), &c)| FormTerm { i: i + 1, j: j + 1, k: k + 1, l: l + 1, c }).collect();
        Self { n: b.dim(), terms }
    }
}

impl TryFrom<FormSpec> for BiquadraticForm<f64> {
    type Error = Error;
    fn try_from(spec: FormSpec) -> Result<Self> {
        let mut b = BiquadraticForm::zero(spec.n);
        for t in spec.terms {
            if [t.i, t.j, t.k, t.l].contains(&0) {
                return Err(Error::Parse("form indices are 1-based".into()));
            }
            if !t.c.is_finite() {
                return Err(Error::Parse("non-finite form coefficient".into()));
            }
            b.add_term(t.i - 1, t.j - 1, t.k - 1, t.l - 1, t.c)?;
        }
        Ok(b)
    }
}

impl BiquadraticForm<f64> {
    pub fn load(path: &Path) -> Result<Self> {
        let spec: FormSpec = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        spec.try_into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{BuiltinMap, ComplexMap};
    use num_bigint::BigInt;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn choi_restriction_gives_choi_form() {
        let m = ComplexMap::builtin(BuiltinMap::Choi).restrict_to_symmetric(0.0).unwrap();
        assert_eq!(form_from_map(&m), choi_form::<f64>());
        assert_eq!(map_from_form(&choi_form::<f64>()), m);
        let img = map_from_form(&choi_form::<f64>());
        assert_eq!(img.diag_image(0)[(0, 0)], 1.0);
        assert_eq!(img.diag_image(0)[(1, 1)], 1.0);
        assert_eq!(img.sym_image(0, 1)[(0, 1)], -1.0);
    }

    #[test]
    fn evaluation_examples() {
        let b = choi_form::<BigRational>();
        let e = |k: usize| (0..3).map(|r| q((r == k) as i64)).collect::<Vec<_>>();
        let ones = vec![q(1); 3];
        assert_eq!(b.evaluate(&e(0), &e(0)).unwrap(), q(1));
        assert_eq!(b.evaluate(&ones, &ones).unwrap(), q(0));
        assert_eq!(b.evaluate(&e(0), &e(2)).unwrap(), q(0));
        assert!(b.evaluate(&ones[..2], &ones).is_err());
    }

    #[test]
    fn identity_and_zero() {
        let id = ComplexMap::identity(3).restrict_to_symmetric(0.0).unwrap();
        let b = form_from_map(&id);
        let x = [1.0, -2.0, 0.5];
        let y = [0.25, 3.0, -1.0];
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        assert!((b.evaluate(&x, &y).unwrap() - dot * dot).abs() < 1e-12);
        assert_eq!(map_from_form(&b), id);

        let zero = ComplexMap::zero(3).restrict_to_symmetric(0.0).unwrap();
        assert_eq!(form_from_map(&zero), BiquadraticForm::zero(3));
        assert_eq!(map_from_form(&BiquadraticForm::<f64>::zero(3)), zero);
    }

    #[test]
    fn json_round_trip() {
        let b = choi_form::<f64>();
        let text = serde_json::to_string(&FormSpec::from(&b)).unwrap();
        assert!(text.contains("{\"i\":1,\"j\":1,\"k\":1,\"l\":1,\"c\":1.0}"));
        let back: BiquadraticForm<f64> = serde_json::from_str::<FormSpec>(&text).unwrap().try_into().unwrap();
        assert_eq!(back, b);
        let bad = FormSpec { n: 3, terms: vec![FormTerm { i: 0, j: 1, k: 1, l: 1, c: 1.0 }] };
        assert!(BiquadraticForm::try_from(bad).is_err());
    }
}
