use serde::{Deserialize, Serialize};

use super::probes::{ProbeFamily, ProbeVar};
use crate::error::{Error, Result};
use crate::maps::ComplexMap;
use crate::matrix::ComplexMatrix;

/// Fit residuals above this (relative to the sampled magnitudes) mean
/// the sampled values are not a polynomial of the requested degree.
pub const FIT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Minor {
    /// `d_k`: delete row and column `k` (1-based).
    Principal(usize),
    Det,
}

impl Minor {
    pub fn of(&self, m: &ComplexMatrix) -> Result<f64> {
        let v = match *self {
            Minor::Principal(k) => m.principal_minor(k)?,
            Minor::Det => m.determinant(),
        };
        Ok(v.re)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinorFit {
    pub family: ProbeFamily,
    pub minor: Minor,
    /// Value of `s` held fixed while `t` varies.
    pub s: f64,
    /// Coefficients of `t^0, t^1, ..`.
    pub coefficients: Vec<f64>,
    pub residual: f64,
}

impl MinorFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }
}

/// 17 Chebyshev points on `[-2, 2]`.
pub fn default_grid() -> Vec<f64> {
    let n = 17;
    (0..n).map(|k| 2.0 * ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos()).collect()
}

/// Sum over the family's sign choices of the minor at `(t, s)`.
pub fn probe_minor_value(map: &ComplexMap, family: &ProbeFamily, minor: Minor, t: f64, s: f64) -> Result<f64> {
    family.instances().iter().map(|inst| minor.of(&map.apply(&inst.matrix(t, s))?)).sum()
}

/// Samples `t ↦ minor(map(X(t)))` on `grid` and fits a polynomial of
/// degree `degree <= 4` by least squares.
pub fn probe_minor_polynomial(
    map: &ComplexMap,
    family: &ProbeFamily,
    minor: Minor,
    s: f64,
    grid: &[f64],
    degree: usize,
) -> Result<MinorFit> {
    if degree > 4 {
        return Err(Error::Precondition(format!("fit degree {degree} exceeds 4")));
    }
    if grid.len() <= degree {
        return Err(Error::Precondition(format!("grid of {} points cannot fit degree {degree}", grid.len())));
    }
    let values: Vec<f64> = grid.iter().map(|&t| probe_minor_value(map, family, minor, t, s)).collect::<Result<_>>()?;
    let coefficients = if family.uses(ProbeVar::T) {
        least_squares(grid, &values, degree)
    } else {
        let mut c = vec![0.0; degree + 1];
        c[0] = values.iter().sum::<f64>() / values.len() as f64;
        c
    };
    let fit = MinorFit { family: family.clone(), minor, s, coefficients, residual: 0.0 };
    let scale = 1.0 + values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let residual = grid.iter().zip(&values).fold(0.0f64, |m, (&t, v)| m.max((fit.eval(t) - v).abs())) / scale;
    if residual > FIT_TOL {
        return Err(Error::InconsistentFit { residual });
    }
    // round away noise far below the residual scale
    let coefficients = fit.coefficients.iter().map(|&c| if c.abs() < 1e-12 * scale { 0.0 } else { c }).collect();
    Ok(MinorFit { coefficients, residual, ..fit })
}

/// Normal equations in the monomial basis, solved by partial-pivot
/// elimination; well conditioned for degree <= 4 on `[-2, 2]`.
fn least_squares(ts: &[f64], ys: &[f64], degree: usize) -> Vec<f64> {
    let m = degree + 1;
    let mut a = vec![vec![0.0; m + 1]; m];
    for (&t, &y) in ts.iter().zip(ys) {
        let pw: Vec<f64> = (0..m).map(|k| t.powi(k as i32)).collect();
        for r in 0..m {
            for c in 0..m {
                a[r][c] += pw[r] * pw[c];
            }
            a[r][m] += pw[r] * y;
        }
    }
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        a.swap(col, piv);
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let f = row[col] / pivot_row[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    (0..m).map(|r| a[r][m] / a[r][r]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::BuiltinMap;
    use crate::positivity::probes::PAPER_FAMILIES;

    #[test]
    fn choi_minor_examples() {
        let phi = ComplexMap::builtin(BuiltinMap::Choi);
        let fam = ProbeFamily::parse("X[1,t,0]").unwrap();
        let fit = probe_minor_polynomial(&phi, &fam, Minor::Principal(3), 0.0, &default_grid(), 4).unwrap();
        assert_eq!(fit.coefficients, vec![1.0, 0.0, 0.0, 0.0, 0.0]);

        let fixed = ProbeFamily::parse("X[1,1,i]").unwrap();
        let det = probe_minor_polynomial(&phi, &fixed, Minor::Det, 0.0, &default_grid(), 0).unwrap();
        assert!(det.coefficients[0].abs() < 1e-12);

        let zero = probe_minor_polynomial(&ComplexMap::zero(3), &fam, Minor::Det, 0.0, &default_grid(), 4).unwrap();
        assert!(zero.coefficients.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn choi_minors_are_nonnegative_on_wide_grids() {
        let phi = ComplexMap::builtin(BuiltinMap::Choi);
        let wide: Vec<f64> = (-20..=20).map(|k| k as f64 * 50.0).collect();
        for kind in PAPER_FAMILIES {
            let fam = ProbeFamily::parse(kind).unwrap();
            for minor in [Minor::Principal(1), Minor::Principal(2), Minor::Principal(3), Minor::Det] {
                for s in [-1.5, 0.0, 0.5] {
                    let fit = probe_minor_polynomial(&phi, &fam, minor, s, &default_grid(), 4).unwrap();
                    for &t in &wide {
                        let scale = 1.0 + t.abs().powi(4);
                        assert!(fit.eval(t) >= -1e-9 * scale, "{kind} {minor:?} s={s} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn wrong_degree_is_reported() {
        let phi = ComplexMap::builtin(BuiltinMap::Choi);
        let fam = ProbeFamily::parse("X[1,t,0]").unwrap();
        assert!(matches!(
            probe_minor_polynomial(&phi, &fam, Minor::Det, 0.0, &default_grid(), 1),
            Err(Error::InconsistentFit { .. })
        ));
        assert!(probe_minor_polynomial(&phi, &fam, Minor::Det, 0.0, &default_grid(), 5).is_err());
    }
}
