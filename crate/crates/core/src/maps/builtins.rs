use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{antisymmetric_unit, BasisElement, ComplexMap, LinearMap};
use crate::error::Error;
use crate::matrix::Matrix;
use crate::scalar::ComplexRing;

/// Named maps on `M_3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinMap {
    Choi,
    Transpose,
    Identity,
    Psi1,
    Psi2,
    Psi3,
}

impl BuiltinMap {
    pub const ALL: [BuiltinMap; 6] = [Self::Choi, Self::Transpose, Self::Identity, Self::Psi1, Self::Psi2, Self::Psi3];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Choi => "choi",
            Self::Transpose => "transpose",
            Self::Identity => "identity",
            Self::Psi1 => "psi1",
            Self::Psi2 => "psi2",
            Self::Psi3 => "psi3",
        }
    }

    pub fn build(&self) -> ComplexMap {
        self.build_generic()
    }

    /// The same map over any complex ring (used with polynomial entries).
    pub fn build_generic<T: ComplexRing>(&self) -> LinearMap<T> {
        match self {
            Self::Choi => choi_map(),
            Self::Transpose => LinearMap::transpose_map(3),
            Self::Identity => LinearMap::identity(3),
            Self::Psi1 => {
                let phi = choi_map::<T>();
                phi.add(&phi.compose_transpose()).expect("same dimension").scale(&T::one().half())
            }
            Self::Psi2 => LinearMap::from_fn(3, psi2_formula),
            Self::Psi3 => {
                let mut m = choi_map::<T>();
                // A23 -> A23, hence H23 = i A23 -> H23
                m.set_image(BasisElement::Herm(1, 2), antisymmetric_unit::<T>(3, 1, 2).mul_i()).expect("3x3 image");
                m
            }
        }
    }
}

impl fmt::Display for BuiltinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::UnknownMap(s.to_string()))
    }
}

/// `Φ(X)` with diagonal `(x11 + x33, x22 + x11, x33 + x22)` and negated
/// off-diagonal entries.
pub fn choi_formula<T: ComplexRing>(x: &Matrix<T>) -> Matrix<T> {
    Matrix::from_fn(3, |r, c| {
        if r == c {
            x[(r, r)].clone() + x[((r + 2) % 3, (r + 2) % 3)].clone()
        } else {
            -x[(r, c)].clone()
        }
    })
}

fn choi_map<T: ComplexRing>() -> LinearMap<T> {
    LinearMap::from_fn(3, choi_formula)
}

/// Entry formula of Ψ₂: agrees with Φ on symmetric matrices and sends
/// `A12 -> -A12`, `A13 -> -A13`, `A23 -> -A12`.
pub fn psi2_formula<T: ComplexRing>(x: &Matrix<T>) -> Matrix<T> {
    let e = |r: usize, c: usize| x[(r, c)].clone();
    let anti23 = (e(1, 2) - e(2, 1)).half();
    let sym23 = (e(1, 2) + e(2, 1)).half();
    Matrix::from_rows(vec![
        vec![e(0, 0) + e(2, 2), -e(0, 1) - anti23.clone(), -e(0, 2)],
        vec![-e(1, 0) + anti23, e(0, 0) + e(1, 1), -sym23.clone()],
        vec![-e(2, 0), -sym23, e(1, 1) + e(2, 2)],
    ])
    .expect("3x3")
}
