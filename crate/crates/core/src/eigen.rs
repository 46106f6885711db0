//! Hermitian eigensolver for small dense matrices.
//!
//! A hermitian `A = R + iJ` is embedded as the real symmetric block matrix
//! `[[R, -J], [J, R]]`, whose spectrum is that of `A` with every eigenvalue
//! doubled. The embedding is diagonalised by cyclic Jacobi rotations.

use num_complex::Complex64;

use crate::matrix::ComplexMatrix;

const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 64;

pub struct HermitianEigen {
    /// Eigenvalues in nondecreasing order.
    pub values: Vec<f64>,
    /// Unit eigenvector for `values[0]`.
    pub min_vector: Vec<Complex64>,
}

pub fn eigh(a: &ComplexMatrix) -> HermitianEigen {
    let n = a.dim();
    let m = 2 * n;
    let mut s = vec![0.0; m * m];
    for r in 0..n {
        for c in 0..n {
            // symmetrise so the embedding is exactly symmetric
            let z = (a[(r, c)] + a[(c, r)].conj()) * 0.5;
            s[r * m + c] = z.re;
            s[(r + n) * m + (c + n)] = z.re;
            s[r * m + (c + n)] = -z.im;
            s[(r + n) * m + c] = z.im;
        }
    }
    let mut v = vec![0.0; m * m];
    for k in 0..m {
        v[k * m + k] = 1.0;
    }
    jacobi(&mut s, &mut v, m);

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| s[i * m + i].total_cmp(&s[j * m + j]));
    let values = order.iter().step_by(2).map(|&k| s[k * m + k]).collect();

    let k = order[0];
    let mut w: Vec<Complex64> = (0..n).map(|r| Complex64::new(v[r * m + k], v[(r + n) * m + k])).collect();
    let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        w.iter_mut().for_each(|z| *z /= norm);
    }
    HermitianEigen { values, min_vector: w }
}

fn jacobi(s: &mut [f64], v: &mut [f64], m: usize) {
    let scale = s.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..m)
            .flat_map(|p| (0..m).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| s[p * m + q] * s[p * m + q])
            .sum::<f64>()
            .sqrt();
        if off <= OFF_DIAGONAL_TOL * scale {
            return;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = s[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let app = s[p * m + p];
                let aqq = s[q * m + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..m {
                    let skp = s[k * m + p];
                    let skq = s[k * m + q];
                    s[k * m + p] = cs * skp - sn * skq;
                    s[k * m + q] = sn * skp + cs * skq;
                }
                for k in 0..m {
                    let spk = s[p * m + k];
                    let sqk = s[q * m + k];
                    s[p * m + k] = cs * spk - sn * sqk;
                    s[q * m + k] = sn * spk + cs * sqk;
                }
                for k in 0..m {
                    let vkp = v[k * m + p];
                    let vkq = v[k * m + q];
                    v[k * m + p] = cs * vkp - sn * vkq;
                    v[k * m + q] = sn * vkp + cs * vkq;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c, Matrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n);
        for r in 0..n {
            m[(r, r)] = c(rng.random_range(-2.0..2.0), 0.0);
            for col in r + 1..n {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(r, col)] = z;
                m[(col, r)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn backward_error_and_eigenvector() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 3, 5, 9] {
            for _ in 0..20 {
                let a = random_hermitian(n, &mut rng);
                let e = eigh(&a);
                assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
                let w = &e.min_vector;
                let lam = e.values[0];
                let res: f64 = (0..n)
                    .map(|r| ((0..n).map(|k| a[(r, k)] * w[k]).sum::<Complex64>() - w[r] * lam).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res < 1e-11 * (1.0 + a.max_abs()), "n={n} residual {res}");
                let trace: f64 = (0..n).map(|k| a[(k, k)].re).sum();
                assert!((trace - e.values.iter().sum::<f64>()).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn determinant_is_product_of_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_hermitian(3, &mut rng);
            let det = a.determinant();
            let prod: f64 = eigh(&a).values.iter().product();
            assert!(det.im.abs() < 1e-12);
            assert!((det.re - prod).abs() <= 1e-9 * det.re.abs().max(1.0), "{} vs {prod}", det.re);
        }
    }

    #[test]
    fn diagonal_input_is_already_converged() {
        let d = Matrix::from_fn(3, |r, col| if r == col { c([3.0, -1.0, 2.0][r], 0.0) } else { c(0.0, 0.0) });
        assert_eq!(eigh(&d).values, vec![-1.0, 2.0, 3.0]);
    }
}
