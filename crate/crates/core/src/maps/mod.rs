//! Linear maps on `M_n` stored by their images of the hermitian basis.

mod basis;
mod builtins;
pub mod random;
mod restriction;
mod spec;

use num_complex::Complex64;

pub use basis::{antisymmetric_unit, symmetric_unit, BasisElement, HermitianBasis};
pub use builtins::BuiltinMap;
pub use restriction::SymmetricRestriction;
pub use spec::MapSpec;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Matrix, RealMatrix};
use crate::scalar::ComplexRing;

/// A complex-linear map `M_n -> M_n`, determined by its values on the
/// hermitian basis `{E_kk, S_kl, H_kl}` (in [`HermitianBasis`] order).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap<T> {
    n: usize,
    images: Vec<Matrix<T>>,
}

pub type ComplexMap = LinearMap<Complex64>;

impl<T: ComplexRing> LinearMap<T> {
    pub fn from_images(n: usize, images: Vec<Matrix<T>>) -> Result<Self> {
        if images.len() != n * n {
            return Err(Error::Dimension { expected: n * n, found: images.len() });
        }
        if let Some(bad) = images.iter().find(|m| m.dim() != n) {
            return Err(Error::Dimension { expected: n, found: bad.dim() });
        }
        Ok(Self { n, images })
    }

    /// Builds the map whose basis images are `f(B)`.
    pub fn from_fn(n: usize, f: impl Fn(&Matrix<T>) -> Matrix<T>) -> Self {
        let images = HermitianBasis::new(n).elements().iter().map(|e| f(&e.matrix(n))).collect();
        Self { n, images }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_| Matrix::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, Matrix::clone)
    }

    pub fn transpose_map(n: usize) -> Self {
        Self::from_fn(n, Matrix::transpose)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> HermitianBasis {
        HermitianBasis::new(self.n)
    }

    pub fn images(&self) -> &[Matrix<T>] {
        &self.images
    }

    pub fn image(&self, e: BasisElement) -> &Matrix<T> {
        let idx = self.basis().position(e).expect("basis element outside the map dimension");
        &self.images[idx]
    }

    pub fn set_image(&mut self, e: BasisElement, m: Matrix<T>) -> Result<()> {
        if m.dim() != self.n {
            return Err(Error::Dimension { expected: self.n, found: m.dim() });
        }
        let idx = self
            .basis()
            .position(e)
            .ok_or_else(|| Error::Precondition(format!("{e} is not a basis element of M_{}", self.n)))?;
        self.images[idx] = m;
        Ok(())
    }

    /// Applies the map through the decomposition
    /// `X = Σ x_kk E_kk + Σ_{k<l} [½(x_kl + x_lk) S_kl + (x_kl - x_lk)/(2i) H_kl]`.
    pub fn apply(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        if x.dim() != self.n {
            return Err(Error::Dimension { expected: self.n, found: x.dim() });
        }
        let n = self.n;
        let basis = self.basis();
        let mut out = Matrix::zeros(n);
        for (e, img) in basis.elements().iter().zip(&self.images) {
            let coeff = match *e {
                BasisElement::Diag(k) => x[(k, k)].clone(),
                BasisElement::Sym(k, l) => (x[(k, l)].clone() + x[(l, k)].clone()).half(),
                BasisElement::Herm(k, l) => -(x[(k, l)].clone() - x[(l, k)].clone()).half().mul_i(),
            };
            if coeff.is_zero() {
                continue;
            }
            out = out.zip_with(img, |acc, m| acc.clone() + coeff.clone() * m.clone());
        }
        Ok(out)
    }

    /// Image of the matrix unit `E_kl` (0-based).
    pub fn unit_image(&self, k: usize, l: usize) -> Matrix<T> {
        use std::cmp::Ordering;
        match k.cmp(&l) {
            Ordering::Equal => self.image(BasisElement::Diag(k)).clone(),
            Ordering::Less => {
                let s = self.image(BasisElement::Sym(k, l));
                let h = self.image(BasisElement::Herm(k, l));
                s.zip_with(h, |a, b| (a.clone() - b.mul_i()).half())
            }
            Ordering::Greater => {
                let s = self.image(BasisElement::Sym(l, k));
                let h = self.image(BasisElement::Herm(l, k));
                s.zip_with(h, |a, b| (a.clone() + b.mul_i()).half())
            }
        }
    }

    /// Image of `A_kl = E_kl - E_lk = -i H_kl` (0-based, `k < l`).
    pub fn antisymmetric_image(&self, k: usize, l: usize) -> Matrix<T> {
        self.image(BasisElement::Herm(k, l)).mul_i().neg()
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let images =
            self.images.iter().zip(&other.images).map(|(a, b)| a.zip_with(b, |x, y| x.clone() + y.clone())).collect();
        Ok(Self { n: self.n, images })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let images =
            self.images.iter().zip(&other.images).map(|(a, b)| a.zip_with(b, |x, y| x.clone() - y.clone())).collect();
        Ok(Self { n: self.n, images })
    }

    pub fn scale(&self, s: &T) -> Self {
        Self { n: self.n, images: self.images.iter().map(|m| m.scale(s)).collect() }
    }

    /// `m ∘ t`: fixes the `E` and `S` images and negates the `H` images,
    /// since `H_kl^t = -H_kl`.
    pub fn compose_transpose(&self) -> Self {
        let basis = self.basis();
        let images = basis
            .elements()
            .iter()
            .zip(&self.images)
            .map(|(e, m)| if matches!(e, BasisElement::Herm(..)) { m.neg() } else { m.clone() })
            .collect();
        Self { n: self.n, images }
    }

    /// Choi matrix `Σ_{k,l} E_kl ⊗ m(E_kl)`, of size `n² x n²`.
    pub fn choi_matrix(&self) -> Matrix<T> {
        let n = self.n;
        let blocks: Vec<Vec<Matrix<T>>> = (0..n).map(|k| (0..n).map(|l| self.unit_image(k, l)).collect()).collect();
        Matrix::from_fn(n * n, |r, c| blocks[r / n][c / n][(r % n, c % n)].clone())
    }
}

impl ComplexMap {
    pub fn builtin(which: BuiltinMap) -> Self {
        which.build()
    }

    /// Largest entrywise deviation over all basis images.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.images.iter().zip(&other.images).fold(0.0, |m, (a, b)| m.max(a.max_abs_diff(b)))
    }

    pub fn maps_equal(&self, other: &Self, tol: f64) -> bool {
        self.max_deviation(other) <= tol
    }

    /// Images of the real basis `{E_kk, S_kl, A_kl}` in that order.
    pub fn real_basis_images(&self) -> Vec<ComplexMatrix> {
        let basis = self.basis();
        basis
            .elements()
            .iter()
            .zip(&self.images)
            .map(|(e, m)| match *e {
                BasisElement::Herm(k, l) => self.antisymmetric_image(k, l),
                _ => m.clone(),
            })
            .collect()
    }

    /// Splits the map into `(m_re, m_im)` with `m(X) = m_re(X) + i m_im(X)`
    /// for real `X`, both real-preserving.
    pub fn real_imag_split(&self) -> (Self, Self) {
        let basis = self.basis();
        let mut re = Vec::with_capacity(self.images.len());
        let mut im = Vec::with_capacity(self.images.len());
        for (e, img) in basis.elements().iter().zip(self.real_basis_images()) {
            let r = img.map(|z| Complex64::new(z.re, 0.0));
            let i = img.map(|z| Complex64::new(z.im, 0.0));
            // H = i A, so the H image is i times the A image
            if matches!(e, BasisElement::Herm(..)) {
                re.push(r.mul_i());
                im.push(i.mul_i());
            } else {
                re.push(r);
                im.push(i);
            }
        }
        (Self { n: self.n, images: re }, Self { n: self.n, images: im })
    }

    pub fn preserves_real(&self, tol: f64) -> bool {
        self.real_basis_images().iter().all(|m| m.is_real(tol))
    }

    /// Sends `S_n` into `S_n`: `E_kk` and `S_kl` map to real symmetric matrices.
    pub fn preserves_symmetric(&self, tol: f64) -> bool {
        self.basis()
            .elements()
            .iter()
            .zip(&self.images)
            .filter(|(e, _)| !matches!(e, BasisElement::Herm(..)))
            .all(|(_, m)| m.is_real(tol) && m.max_abs_diff(&m.transpose()) <= tol)
    }

    /// Sends real antisymmetric matrices to real antisymmetric matrices.
    pub fn preserves_antisymmetric(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).flat_map(|k| (k + 1..n).map(move |l| (k, l))).all(|(k, l)| {
            let m = self.antisymmetric_image(k, l);
            m.is_real(tol) && m.max_abs_diff(&m.transpose().neg()) <= tol
        })
    }

    pub fn preserves_hermitian(&self, tol: f64) -> bool {
        self.images.iter().all(|m| m.hermiticity_deviation() <= tol)
    }

    /// For a real-preserving map, checks that hermiticity preservation is
    /// equivalent to preserving symmetric and antisymmetric matrices.
    pub fn proposition_hermitian_check(&self, tol: f64) -> Result<bool> {
        if !self.preserves_real(tol) {
            return Err(Error::Precondition("map does not preserve real matrices".into()));
        }
        let lhs = self.preserves_hermitian(tol);
        let rhs = self.preserves_symmetric(tol) && self.preserves_antisymmetric(tol);
        Ok(lhs == rhs)
    }

    pub fn is_completely_positive(&self, tol: f64) -> Result<bool> {
        Ok(self.choi_matrix().is_psd(tol)?.is_psd)
    }

    pub fn is_completely_copositive(&self, tol: f64) -> Result<bool> {
        self.compose_transpose().is_completely_positive(tol)
    }

    pub fn restrict_to_symmetric(&self, tol: f64) -> Result<SymmetricRestriction<f64>> {
        if !self.preserves_symmetric(tol) {
            return Err(Error::Precondition("map does not preserve symmetric matrices".into()));
        }
        let images: Vec<RealMatrix> = self
            .basis()
            .elements()
            .iter()
            .zip(&self.images)
            .filter(|(e, _)| !matches!(e, BasisElement::Herm(..)))
            .map(|(_, m)| {
                let s = m.map(|z| z.re);
                // average out sub-tolerance asymmetry
                Matrix::from_fn(self.n, |r, c| 0.5 * (s[(r, c)] + s[(c, r)]))
            })
            .collect();
        SymmetricRestriction::new(self.n, images)
    }
}

#[cfg(test)]
mod tests {
    use super::random::random_real_preserving;
    use super::*;
    use crate::matrix::{c, rank_one_projector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn choi() -> ComplexMap {
        ComplexMap::builtin(BuiltinMap::Choi)
    }

    fn rand_c(rng: &mut ChaCha8Rng) -> Complex64 {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        Matrix::from_fn(n, |_, _| rand_c(rng))
    }

    #[test]
    fn apply_reconstructs_from_units() {
        let m = choi();
        let x = Matrix::unit(3, 0, 1);
        assert_eq!(m.apply(&x).unwrap(), m.unit_image(0, 1));
        let ones = rank_one_projector(&[c(1.0, 0.0); 3]).unwrap();
        let expect = Matrix::from_fn(3, |r, col| if r == col { c(2.0, 0.0) } else { c(-1.0, 0.0) });
        assert_eq!(m.apply(&ones).unwrap(), expect);
        assert!(matches!(m.apply(&ComplexMatrix::zeros(2)), Err(Error::Dimension { .. })));
    }

    #[test]
    fn identity_apply_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let id = ComplexMap::identity(3);
        for _ in 0..10 {
            let x = random_matrix(&mut rng, 3);
            assert!(id.apply(&x).unwrap().max_abs_diff(&x) < 1e-15);
        }
    }

    #[test]
    fn apply_is_complex_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for which in BuiltinMap::ALL {
            let m = ComplexMap::builtin(which);
            for _ in 0..20 {
                let (a, b) = (rand_c(&mut rng), rand_c(&mut rng));
                let (x, y) = (random_matrix(&mut rng, 3), random_matrix(&mut rng, 3));
                let lhs = m.apply(&x.scale(&a).try_add(&y.scale(&b)).unwrap()).unwrap();
                let rhs = m.apply(&x).unwrap().scale(&a).try_add(&m.apply(&y).unwrap().scale(&b)).unwrap();
                assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn real_preserving_maps_give_real_outputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for which in BuiltinMap::ALL {
            let m = ComplexMap::builtin(which);
            assert!(m.preserves_real(0.0));
            for _ in 0..10 {
                let x = Matrix::from_fn(3, |_, _| c(rng.random_range(-1.0..1.0), 0.0));
                assert!(m.apply(&x).unwrap().is_real(1e-15));
            }
        }
    }

    #[test]
    fn real_imag_split_examples() {
        for m in [choi(), ComplexMap::transpose_map(3)] {
            let (re, im) = m.real_imag_split();
            assert!(re.maps_equal(&m, 0.0));
            assert!(im.maps_equal(&ComplexMap::zero(3), 0.0));
        }

        // μ(X) = Φ(X) + i tr(X) A12
        let a12: ComplexMatrix = antisymmetric_unit(3, 0, 1);
        let trace_part = ComplexMap::from_fn(3, |x| a12.scale(&x.trace()));
        let mu = choi().add(&trace_part.scale(&c(0.0, 1.0))).unwrap();
        let (re, im) = mu.real_imag_split();
        assert!(re.maps_equal(&choi(), 1e-15));
        assert!(im.maps_equal(&trace_part, 1e-15));

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = Matrix::from_fn(3, |_, _| c(rng.random_range(-1.0..1.0), 0.0));
        let whole = mu.apply(&x).unwrap();
        let rebuilt = re.apply(&x).unwrap().try_add(&im.apply(&x).unwrap().mul_i()).unwrap();
        assert!(whole.max_abs_diff(&rebuilt) <= 1e-15);
    }

    #[test]
    fn preservation_predicates() {
        let psi2 = ComplexMap::builtin(BuiltinMap::Psi2);
        assert!(psi2.preserves_real(0.0) && psi2.preserves_hermitian(0.0));
        let m = choi();
        assert!(m.preserves_real(0.0));
        assert!(m.preserves_symmetric(0.0));
        assert!(m.preserves_antisymmetric(0.0));
        assert!(m.preserves_hermitian(0.0));

        let mut fixture = ComplexMap::identity(3);
        fixture.set_image(BasisElement::Sym(0, 1), antisymmetric_unit(3, 0, 1)).unwrap();
        assert!(!fixture.preserves_hermitian(0.0));
        assert!(fixture.preserves_real(0.0));
        assert!(fixture.proposition_hermitian_check(0.0).unwrap());
    }

    #[test]
    fn proposition_holds_on_builtins_and_random_fixtures() {
        for which in BuiltinMap::ALL {
            assert!(ComplexMap::builtin(which).proposition_hermitian_check(0.0).unwrap(), "{which:?}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for i in 0..100 {
            let m = random_real_preserving(&mut rng, 3, i % 2 == 0);
            assert!(m.proposition_hermitian_check(0.0).unwrap());
        }
        let complex = ComplexMap::identity(3).scale(&c(0.0, 1.0));
        assert!(matches!(complex.proposition_hermitian_check(0.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn choi_matrix_examples() {
        let id = ComplexMap::identity(3);
        let cid = id.choi_matrix();
        let omega: Vec<Complex64> = (0..9).map(|i| if i % 4 == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect();
        assert_eq!(cid, rank_one_projector(&omega).unwrap());
        assert!(id.is_completely_positive(1e-10).unwrap());

        let t = ComplexMap::transpose_map(3);
        let ev = t.choi_matrix().eigenvalues_hermitian(1e-12).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[8] - 1.0).abs() < 1e-12);
        assert!(!t.is_completely_positive(1e-10).unwrap());
        assert!(t.is_completely_copositive(1e-10).unwrap());

        let m = choi();
        assert!(!m.is_completely_positive(1e-10).unwrap());
        assert!(!m.is_completely_copositive(1e-10).unwrap());
    }

    #[test]
    fn choi_matrix_is_additive() {
        let a = choi();
        let b = ComplexMap::builtin(BuiltinMap::Psi2);
        let sum = a.add(&b).unwrap().choi_matrix();
        assert_eq!(sum, a.choi_matrix().try_add(&b.choi_matrix()).unwrap());
    }

    #[test]
    fn arithmetic() {
        let psi1 = choi().add(&choi().compose_transpose()).unwrap().scale(&c(0.5, 0.0));
        assert!(psi1.maps_equal(&ComplexMap::builtin(BuiltinMap::Psi1), 0.0));
        assert!(choi().add(&ComplexMap::zero(3)).unwrap().maps_equal(&choi(), 0.0));
        assert!(choi().add(&ComplexMap::zero(2)).is_err());
    }

    #[test]
    fn restrictions() {
        let phi = choi().restrict_to_symmetric(0.0).unwrap();
        assert_eq!(ComplexMap::builtin(BuiltinMap::Psi1).restrict_to_symmetric(0.0).unwrap(), phi);
        assert_eq!(ComplexMap::builtin(BuiltinMap::Psi3).restrict_to_symmetric(0.0).unwrap(), phi);
        assert_eq!(ComplexMap::builtin(BuiltinMap::Psi2).restrict_to_symmetric(0.0).unwrap(), phi);

        let id = ComplexMap::identity(3).restrict_to_symmetric(0.0).unwrap();
        let expect: Vec<RealMatrix> = HermitianBasis::new(3)
            .elements()
            .iter()
            .filter(|e| !matches!(e, BasisElement::Herm(..)))
            .map(|e| e.matrix::<Complex64>(3).map(|z| z.re))
            .collect();
        assert_eq!(id.images(), &expect[..]);

        let h = ComplexMap::identity(3).scale(&c(0.0, 1.0));
        assert!(h.restrict_to_symmetric(0.0).is_err());
    }
}
