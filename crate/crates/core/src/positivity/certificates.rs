use num_complex::Complex64;
use serde::Serialize;

use super::sampling::{random_unit_vector, stream_rng};
use crate::error::{Error, Result};
use crate::maps::{BuiltinMap, ComplexMap};
use crate::matrix::{rank_one_projector, Matrix};

/// Checks `m(X[x]) = V m(X[r]) V*` for `x_j = r_j e^{iθ_j}` and
/// `V = diag(e^{iθ_j})`.
pub fn phase_covariance_check(map: &ComplexMap, x: &[Complex64], tol: f64) -> Result<bool> {
    let r: Vec<Complex64> = x.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
    let phases: Vec<Complex64> =
        x.iter().map(|z| if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) }).collect();
    let lhs = map.apply(&rank_one_projector(x)?)?;
    let base = map.apply(&rank_one_projector(&r)?)?;
    let rhs = Matrix::from_fn(x.len(), |k, l| phases[k] * base[(k, l)] * phases[l].conj());
    Ok(lhs.max_abs_diff(&rhs) <= tol)
}

pub const MINOR_TOL: f64 = 1e-10;
pub const DET_TOL: f64 = 1e-9;
pub const BOUND_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Psi3Certificate {
    pub samples: usize,
    pub seed: u64,
    /// Largest `|d_k(Ψ₃(X)) - d_k(Φ(X))|` over samples and `k`.
    pub max_minor_deviation: f64,
    /// Largest deviation of `det Ψ₃(X)` from the closed form.
    pub max_det_deviation: f64,
    /// Smallest of `det - bound` and `bound` over samples.
    pub min_bound_slack: f64,
}

/// `|x1|²|x3|⁴ + |x2|²|x1|⁴ + |x3|²|x2|⁴ - |x1|²|x2|²|x3|² - 2|x1|² Re(x̄2² x3²)`.
pub fn psi3_det_formula(x: &[Complex64]) -> f64 {
    let [p1, p2, p3] = [x[0].norm_sqr(), x[1].norm_sqr(), x[2].norm_sqr()];
    p1 * p3 * p3 + p2 * p1 * p1 + p3 * p2 * p2 - p1 * p2 * p3 - 2.0 * p1 * (x[1].conj().powi(2) * x[2].powi(2)).re
}

/// `2|x1|²(|x2|²|x3|² - Re(x̄2² x3²))`, the AM-GM lower bound of the determinant.
pub fn psi3_det_bound(x: &[Complex64]) -> f64 {
    2.0 * x[0].norm_sqr() * (x[1].norm_sqr() * x[2].norm_sqr() - (x[1].conj().powi(2) * x[2].powi(2)).re)
}

fn pairs(x: &[Complex64]) -> Vec<[f64; 2]> {
    x.iter().map(|z| [z.re, z.im]).collect()
}

/// Checks one vector; `Err` names the first failed check.
pub fn psi3_check_point(x: &[Complex64]) -> Result<(f64, f64, f64)> {
    let phi = ComplexMap::builtin(BuiltinMap::Choi);
    let psi3 = ComplexMap::builtin(BuiltinMap::Psi3);
    let proj = rank_one_projector(x)?;
    let (a, b) = (psi3.apply(&proj)?, phi.apply(&proj)?);
    let mut minor_dev: f64 = 0.0;
    for k in 1..=3 {
        minor_dev = minor_dev.max((a.principal_minor(k)? - b.principal_minor(k)?).norm());
    }
    if minor_dev > MINOR_TOL {
        return Err(Error::CertificateFailure {
            check: "minors",
            witness: pairs(x),
            detail: format!("principal minors differ by {minor_dev:e}"),
        });
    }
    let det = a.determinant();
    let det_dev = (det - Complex64::new(psi3_det_formula(x), 0.0)).norm();
    if det_dev > DET_TOL {
        return Err(Error::CertificateFailure {
            check: "determinant",
            witness: pairs(x),
            detail: format!("determinant deviates from the closed form by {det_dev:e}"),
        });
    }
    let bound = psi3_det_bound(x);
    let slack = (det.re - bound).min(bound);
    if slack < -BOUND_TOL {
        return Err(Error::CertificateFailure {
            check: "am-gm bound",
            witness: pairs(x),
            detail: format!("det {} against bound {bound}", det.re),
        });
    }
    Ok((minor_dev, det_dev, slack))
}

/// Runs [`psi3_check_point`] on `samples` seeded random unit vectors.
pub fn psi3_positivity_certificate(samples: usize, seed: u64) -> Result<Psi3Certificate> {
    let mut rng = stream_rng(seed, 0);
    let mut cert = Psi3Certificate {
        samples,
        seed,
        max_minor_deviation: 0.0,
        max_det_deviation: 0.0,
        min_bound_slack: f64::INFINITY,
    };
    for _ in 0..samples {
        let x = random_unit_vector(&mut rng, 3);
        let (m, d, s) = psi3_check_point(&x)?;
        cert.max_minor_deviation = cert.max_minor_deviation.max(m);
        cert.max_det_deviation = cert.max_det_deviation.max(d);
        cert.min_bound_slack = cert.min_bound_slack.min(s);
    }
    Ok(cert)
}
