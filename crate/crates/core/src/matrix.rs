//! Dense square matrices over a [`Ring`], with the floating complex
//! specialisation used by the numeric positivity checks.
//!
//! Minor indices are 1-based throughout: `principal_minor(a, k)` deletes
//! row `k` and column `k` of `a`, counting from 1.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::eigen;
use crate::error::{Error, Result};
use crate::scalar::{ComplexRing, Ring};

/// Square `n x n` matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

pub type ComplexMatrix = Matrix<Complex64>;
pub type RealMatrix = Matrix<f64>;

/// Default absolute tolerance on the least eigenvalue for PSD tests.
pub const PSD_TOL: f64 = 1e-10;

impl<T: Ring> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension { expected: n, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(f(r, c));
            }
        }
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    /// Matrix unit `E_kl` with 0-based indices.
    pub fn unit(n: usize, k: usize, l: usize) -> Self {
        Self::from_fn(n, |r, c| if r == k && c == l { T::one() } else { T::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |r, c| self[(c, r)].clone())
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, k| acc + self[(k, k)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        Ok(Self::from_fn(n, |r, c| (0..n).fold(T::zero(), |acc, k| acc + self[(r, k)].clone() * other[(k, c)].clone())))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|a| s.clone() * a.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub(crate) fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect() }
    }

    /// Submatrix with the given 0-based row and column removed.
    pub fn without(&self, row: usize, col: usize) -> Self {
        let n = self.n - 1;
        Self::from_fn(n, |r, c| {
            let rr = if r >= row { r + 1 } else { r };
            let cc = if c >= col { c + 1 } else { c };
            self[(rr, cc)].clone()
        })
    }

    /// Determinant by cofactor expansion. Exact in any ring; the closed
    /// forms for `n <= 3` are used by the polynomial code path.
    pub fn det_cofactor(&self) -> T {
        let a = |r: usize, c: usize| self[(r, c)].clone();
        match self.n {
            1 => a(0, 0),
            2 => a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0),
            3 => {
                a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                    + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
            }
            n => (0..n).fold(T::zero(), |acc, c| {
                let term = a(0, c) * self.without(0, c).det_cofactor();
                if c % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            }),
        }
    }

    /// `d_k`: determinant of the submatrix with row `k` and column `k`
    /// deleted, `k` counted from 1.
    pub fn principal_minor(&self, k: usize) -> Result<T> {
        if k == 0 || k > self.n {
            return Err(Error::IndexOutOfRange { index: k, n: self.n });
        }
        if self.n == 1 {
            return Ok(T::one());
        }
        Ok(self.without(k - 1, k - 1).det_cofactor())
    }
}

impl<T: ComplexRing> Matrix<T> {
    pub fn conj(&self) -> Self {
        self.map(ComplexRing::conj)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |r, c| self[(c, r)].conj())
    }

    pub fn mul_i(&self) -> Self {
        self.map(ComplexRing::mul_i)
    }

    pub fn half(&self) -> Self {
        self.map(ComplexRing::half)
    }

    /// `x x*` with entries `x_k conj(x_l)`.
    pub fn rank_one(x: &[T]) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(Self::from_fn(x.len(), |r, c| x[r].clone() * x[c].conj()))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.n + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.n + c]
    }
}

/// Outcome of a PSD test. On failure the least eigenvalue and a unit
/// eigenvector for it are returned.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub lambda_min: f64,
    pub witness: Option<Vec<Complex64>>,
}

pub fn rank_one_projector(x: &[Complex64]) -> Result<ComplexMatrix> {
    Matrix::rank_one(x)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl ComplexMatrix {
    pub fn from_real(m: &RealMatrix) -> Self {
        m.map(|&v| c(v, 0.0))
    }

    /// Largest entrywise modulus of `A - A*`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.n;
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for col in r..n {
                dev = dev.max((self[(r, col)] - self[(col, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation, tol });
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }

    /// Determinant: cofactor expansion for `n <= 3`, partial-pivot LU above.
    pub fn determinant(&self) -> Complex64 {
        if self.n <= 3 {
            return self.det_cofactor();
        }
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot =
                (col..n).max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm())).unwrap_or(col);
            if a[pivot * n + col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for row in col + 1..n {
                let f = a[row * n + col] / p;
                for k in col..n {
                    let v = a[col * n + k];
                    a[row * n + k] -= f * v;
                }
            }
        }
        det
    }

    /// Eigenvalues of a hermitian matrix in nondecreasing order.
    pub fn eigenvalues_hermitian(&self, tol: f64) -> Result<Vec<f64>> {
        self.ensure_hermitian(tol)?;
        Ok(eigen::eigh(self).values)
    }

    /// PSD test on the least eigenvalue: PSD iff `lambda_min >= -tol`.
    pub fn is_psd(&self, tol: f64) -> Result<PsdVerdict> {
        self.ensure_hermitian(tol)?;
        let eig = eigen::eigh(self);
        let lambda_min = eig.values[0];
        if lambda_min >= -tol {
            Ok(PsdVerdict { is_psd: true, lambda_min, witness: None })
        } else {
            Ok(PsdVerdict { is_psd: false, lambda_min, witness: Some(eig.min_vector) })
        }
    }

    /// `H = S + iA` with `S = Re H` symmetric and `A = Im H` antisymmetric.
    pub fn hermitian_split(&self, tol: f64) -> Result<(RealMatrix, RealMatrix)> {
        self.ensure_hermitian(tol)?;
        Ok((self.map(|z| z.re), self.map(|z| z.im)))
    }

    pub(crate) fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.n).map(|r| (0..self.n).map(|col| [self[(r, col)].re, self[(r, col)].im]).collect()).collect()
    }

    pub(crate) fn from_pairs(rows: Vec<Vec<[f64; 2]>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|[re, im]| {
                        if re.is_finite() && im.is_finite() {
                            Ok(c(re, im))
                        } else {
                            Err(Error::Parse("non-finite matrix entry".into()))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        ComplexMatrix::from_pairs(rows).map_err(D::Error::custom)
    }
}
