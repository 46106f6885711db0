use std::fmt;

use crate::matrix::Matrix;
use crate::scalar::ComplexRing;

/// One element of the hermitian basis of `M_n`. Indices are 0-based
/// internally; labels are 1-based (`E11`, `S12`, `H23`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisElement {
    /// `E_kk`
    Diag(usize),
    /// `S_kl = E_kl + E_lk`, `k < l`
    Sym(usize, usize),
    /// `H_kl = i (E_kl - E_lk)`, `k < l`
    Herm(usize, usize),
}

impl BasisElement {
    pub fn label(&self) -> String {
        match *self {
            BasisElement::Diag(k) => format!("E{}{}", k + 1, k + 1),
            BasisElement::Sym(k, l) => format!("S{}{}", k + 1, l + 1),
            BasisElement::Herm(k, l) => format!("H{}{}", k + 1, l + 1),
        }
    }

    pub fn matrix<T: ComplexRing>(&self, n: usize) -> Matrix<T> {
        match *self {
            BasisElement::Diag(k) => Matrix::unit(n, k, k),
            BasisElement::Sym(k, l) => symmetric_unit(n, k, l),
            BasisElement::Herm(k, l) => antisymmetric_unit::<T>(n, k, l).mul_i(),
        }
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `S_kl = E_kl + E_lk` (0-based).
pub fn symmetric_unit<T: ComplexRing>(n: usize, k: usize, l: usize) -> Matrix<T> {
    let mut m = Matrix::unit(n, k, l);
    m[(l, k)] = T::one();
    m
}

/// `A_kl = E_kl - E_lk` (0-based).
pub fn antisymmetric_unit<T: ComplexRing>(n: usize, k: usize, l: usize) -> Matrix<T> {
    let mut m = Matrix::unit(n, k, l);
    m[(l, k)] = -T::one();
    m
}

/// The ordered basis `{E_kk} ∪ {S_kl} ∪ {H_kl}`, with the `S` and `H`
/// blocks in lexicographic `(k, l)` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianBasis {
    n: usize,
    elements: Vec<BasisElement>,
}

impl HermitianBasis {
    pub fn new(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|k| (k + 1..n).map(move |l| (k, l))).collect();
        let elements = (0..n)
            .map(BasisElement::Diag)
            .chain(pairs.iter().map(|&(k, l)| BasisElement::Sym(k, l)))
            .chain(pairs.iter().map(|&(k, l)| BasisElement::Herm(k, l)))
            .collect();
        Self { n, elements }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, e: BasisElement) -> Option<usize> {
        self.elements.iter().position(|&x| x == e)
    }

    pub fn by_label(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.label() == label)
    }

    /// Number of off-diagonal pairs `k < l`.
    pub fn pair_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn ordering_and_count() {
        let b = HermitianBasis::new(3);
        let labels: Vec<String> = b.elements().iter().map(BasisElement::label).collect();
        assert_eq!(labels, ["E11", "E22", "E33", "S12", "S13", "S23", "H12", "H13", "H23"]);
        for n in 1..6 {
            assert_eq!(HermitianBasis::new(n).len(), n * n);
        }
    }

    #[test]
    fn elements_are_hermitian() {
        let b = HermitianBasis::new(3);
        for e in b.elements() {
            let m: Matrix<Complex64> = e.matrix(3);
            assert_eq!(m.hermiticity_deviation(), 0.0, "{e}");
        }
        let a: Matrix<Complex64> = antisymmetric_unit(3, 0, 1);
        assert_eq!(a.mul_i(), BasisElement::Herm(0, 1).matrix(3));
    }
}
