use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Field;

/// A map `S_n -> S_n` given by the images of `E_kk` (k = 1..n) followed by
/// the images of `S_kl` (k < l, lexicographic). All images are symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricRestriction<T> {
    n: usize,
    images: Vec<Matrix<T>>,
}

impl<T: Field> SymmetricRestriction<T> {
    pub fn new(n: usize, images: Vec<Matrix<T>>) -> Result<Self> {
        let expected = n * (n + 1) / 2;
        if images.len() != expected {
            return Err(Error::Dimension { expected, found: images.len() });
        }
        for m in &images {
            if m.dim() != n {
                return Err(Error::Dimension { expected: n, found: m.dim() });
            }
            if *m != m.transpose() {
                return Err(Error::Precondition("restriction image is not symmetric".into()));
            }
        }
        Ok(Self { n, images })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[Matrix<T>] {
        &self.images
    }

    /// Image of `E_kk` (0-based).
    pub fn diag_image(&self, k: usize) -> &Matrix<T> {
        &self.images[k]
    }

    /// Image of `S_kl` (0-based, `k < l`).
    pub fn sym_image(&self, k: usize, l: usize) -> &Matrix<T> {
        assert!(k < l && l < self.n);
        &self.images[self.n + pair_index(self.n, k, l)]
    }

    /// `m(x x^t) = Σ x_k² m(E_kk) + Σ_{k<l} x_k x_l m(S_kl)`.
    pub fn apply_rank_one(&self, x: &[T]) -> Result<Matrix<T>> {
        if x.len() != self.n {
            return Err(Error::Dimension { expected: self.n, found: x.len() });
        }
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for k in 0..n {
            let w = x[k].clone() * x[k].clone();
            out = out.zip_with(self.diag_image(k), |a, b| a.clone() + w.clone() * b.clone());
            for l in k + 1..n {
                let w = x[k].clone() * x[l].clone();
                out = out.zip_with(self.sym_image(k, l), |a, b| a.clone() + w.clone() * b.clone());
            }
        }
        Ok(out)
    }
}

/// Position of the pair `(k, l)`, `k < l`, in lexicographic order.
pub(crate) fn pair_index(n: usize, k: usize, l: usize) -> usize {
    k * (2 * n - k - 1) / 2 + (l - k - 1)
}
