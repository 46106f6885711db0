//! Seeded random maps for tests and perturbation directions.

use rand::Rng;

use super::{BasisElement, ComplexMap, HermitianBasis, LinearMap};
use crate::matrix::{c, ComplexMatrix, Matrix};

/// Map sending real matrices to real matrices, with integer entries in
/// `-2..=2`: real images of `E` and `S`, and `H ↦ i·(real)`. With
/// `hermitian` the real images are symmetric and the `H` images are `i`
/// times an antisymmetric matrix, so the map also preserves hermiticity.
pub fn random_real_preserving(rng: &mut impl Rng, n: usize, hermitian: bool) -> ComplexMap {
    let basis = HermitianBasis::new(n);
    let images = basis
        .elements()
        .iter()
        .map(|e| {
            let raw = Matrix::from_fn(n, |_, _| c(rng.random_range(-2i32..=2) as f64, 0.0));
            let sym = raw.zip_with(&raw.transpose(), |a, b| a + b);
            let anti = raw.zip_with(&raw.transpose(), |a, b| a - b);
            match (e, hermitian) {
                (BasisElement::Herm(..), true) => anti.mul_i(),
                (BasisElement::Herm(..), false) => raw.mul_i(),
                (_, true) => sym,
                (_, false) => raw,
            }
        })
        .collect();
    LinearMap::from_images(n, images).expect("n x n images")
}

/// Random hermitian matrix with entries uniform in the unit square.
pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let raw = Matrix::from_fn(n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    raw.zip_with(&raw.adjoint(), |a, b| (a + b) * 0.5)
}

/// Hermiticity-preserving map with independent random hermitian images of
/// every basis element, scaled so the largest entry has modulus 1.
pub fn random_hermitian_preserving(rng: &mut impl Rng, n: usize) -> ComplexMap {
    let images: Vec<ComplexMatrix> = (0..n * n).map(|_| random_hermitian(rng, n)).collect();
    let scale = images.iter().fold(0.0f64, |a, m| a.max(m.max_abs()));
    let images = images.into_iter().map(|m| m.map(|z| z / scale)).collect();
    LinearMap::from_images(n, images).expect("n x n images")
}
