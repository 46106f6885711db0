use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::eigh;
use crate::maps::ComplexMap;
use crate::matrix::{ComplexMatrix, Matrix};

/// Samples drawn from one counter-based stream before moving to the next.
const BLOCK: u64 = 1024;

/// A map evaluated on rank-one projectors through its precomputed images
/// of the matrix units `E_kl`.
#[derive(Clone, Debug)]
pub struct RankOneEvaluator {
    n: usize,
    units: Vec<ComplexMatrix>,
}

impl RankOneEvaluator {
    pub fn new(map: &ComplexMap) -> Self {
        let n = map.dim();
        let units = (0..n * n).map(|i| map.unit_image(i / n, i % n)).collect();
        Self { n, units }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `m(x x*)`.
    pub fn image(&self, x: &[Complex64]) -> ComplexMatrix {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            for l in 0..n {
                let w = x[k] * x[l].conj();
                if w.re == 0.0 && w.im == 0.0 {
                    continue;
                }
                for (o, u) in out.iter_mut().zip(self.units[k * n + l].entries()) {
                    *o += w * u;
                }
            }
        }
        Matrix::from_fn(n, |r, c| out[r * n + c])
    }

    /// Least eigenvalue of `m(x x*)` for a unit vector `x`. A closed form is
    /// used as a screen for `n = 3`; values near or below zero are
    /// recomputed with the iterative solver.
    pub fn lambda_min(&self, x: &[Complex64]) -> f64 {
        let img = self.image(x);
        if self.n == 3 {
            let fast = lambda_min_3(&img);
            if fast > 1e-6 * (1.0 + img.max_abs()) {
                return fast;
            }
        }
        eigh(&img).values[0]
    }

    /// Least eigenvalue and its eigenvector, always from the iterative solver.
    pub fn lambda_min_exact(&self, x: &[Complex64]) -> (f64, Vec<Complex64>) {
        let e = eigh(&self.image(x));
        (e.values[0], e.min_vector)
    }
}

/// Smallest eigenvalue of a hermitian 3x3 matrix via the trigonometric
/// solution of its characteristic cubic.
pub(crate) fn lambda_min_3(a: &ComplexMatrix) -> f64 {
    let d = [a[(0, 0)].re, a[(1, 1)].re, a[(2, 2)].re];
    let (b01, b02, b12) = (a[(0, 1)], a[(0, 2)], a[(1, 2)]);
    let off = b01.norm_sqr() + b02.norm_sqr() + b12.norm_sqr();
    let q = (d[0] + d[1] + d[2]) / 3.0;
    let s = [d[0] - q, d[1] - q, d[2] - q];
    let p2 = s[0] * s[0] + s[1] * s[1] + s[2] * s[2] + 2.0 * off;
    if p2 <= 0.0 {
        return q;
    }
    let p = (p2 / 6.0).sqrt();
    // det(A - qI) / p³ for the shifted hermitian matrix
    let det = s[0] * s[1] * s[2] + 2.0 * (b01 * b12 * b02.conj()).re
        - s[0] * b12.norm_sqr()
        - s[1] * b02.norm_sqr()
        - s[2] * b01.norm_sqr();
    let r = (det / (2.0 * p * p * p)).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos()
}

/// `x / ‖x‖`, or `None` for the zero vector.
pub fn normalize(x: &[Complex64]) -> Option<Vec<Complex64>> {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (norm > 0.0 && norm.is_finite()).then(|| x.iter().map(|z| z / norm).collect())
}

/// Componentwise standard complex Gaussian, normalized.
pub fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        if let Some(u) = normalize(&v) {
            return u;
        }
    }
}

/// The generator for stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The `index`-th unit vector of the seeded sample sequence. Sample `i`
/// lives in block `i / 1024`, which has its own stream, so any partition of
/// the index range into workers reproduces the same vectors.
pub fn sample_vectors(seed: u64, n: usize, block: u64) -> impl Iterator<Item = Vec<Complex64>> {
    let mut rng = stream_rng(seed, block);
    std::iter::repeat_with(move || random_unit_vector(&mut rng, n)).take(BLOCK as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositivityStatus {
    Violation,
    NoViolationFound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Unit vector with `λ_min(m(x x*)) = lambda_min`.
    pub x: Vec<Complex64>,
    pub lambda_min: f64,
}

/// Outcome of a sampling run. `NoViolationFound` is evidence only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub status: PositivityStatus,
    pub witness: Option<Witness>,
    pub samples_used: u64,
    pub seed: u64,
}

impl PositivityVerdict {
    pub fn is_violation(&self) -> bool {
        self.status == PositivityStatus::Violation
    }
}

/// Checks `λ_min(m(x x*)) >= -tol` on `n_samples` seeded random unit
/// vectors; see [`sample_positivity_with_probes`].
pub fn sample_positivity(map: &ComplexMap, n_samples: u64, seed: u64, tol: f64) -> PositivityVerdict {
    sample_positivity_with_probes(map, &[], n_samples, seed, tol)
}

/// As [`sample_positivity`], testing the given probe vectors (normalized)
/// before the random ones. The first violation in sequence order is
/// reported regardless of how many worker threads run.
pub fn sample_positivity_with_probes(
    map: &ComplexMap,
    probes: &[Vec<Complex64>],
    n_samples: u64,
    seed: u64,
    tol: f64,
) -> PositivityVerdict {
    let eval = RankOneEvaluator::new(map);
    let violation = |x: Vec<Complex64>| -> Option<Witness> {
        if eval.lambda_min(&x) >= -tol {
            return None;
        }
        let (lambda_min, _) = eval.lambda_min_exact(&x);
        (lambda_min < -tol).then_some(Witness { x, lambda_min })
    };

    for (k, p) in probes.iter().enumerate() {
        if let Some(w) = normalize(p).and_then(violation) {
            return PositivityVerdict {
                status: PositivityStatus::Violation,
                witness: Some(w),
                samples_used: k as u64 + 1,
                seed,
            };
        }
    }

    let n = eval.dim();
    let blocks = n_samples.div_ceil(BLOCK);
    let found = (0..blocks).into_par_iter().find_map_first(|b| {
        let len = (n_samples - b * BLOCK).min(BLOCK) as usize;
        sample_vectors(seed, n, b)
            .take(len)
            .enumerate()
            .find_map(|(j, x)| violation(x).map(|w| (b * BLOCK + j as u64, w)))
    });
    let offset = probes.len() as u64;
    match found {
        Some((idx, w)) => PositivityVerdict {
            status: PositivityStatus::Violation,
            witness: Some(w),
            samples_used: offset + idx + 1,
            seed,
        },
        None => PositivityVerdict {
            status: PositivityStatus::NoViolationFound,
            witness: None,
            samples_used: offset + n_samples,
            seed,
        },
    }
}
