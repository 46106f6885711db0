use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampling::{normalize, random_unit_vector, stream_rng, RankOneEvaluator};
use crate::maps::ComplexMap;

/// Stream offset keeping local-search restarts apart from the sampler's
/// streams under the same seed.
const RESTART_STREAM: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Minimum {
    pub x: Vec<Complex64>,
    pub lambda_min: f64,
}

fn to_vector(v: &[f64]) -> Vec<Complex64> {
    v.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()
}

fn to_coords(x: &[Complex64]) -> Vec<f64> {
    x.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn unit_coords(v: &[f64]) -> Vec<f64> {
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter().map(|a| a / norm).collect()
    } else {
        v.to_vec()
    }
}

/// Nelder–Mead on the `2n` real coordinates of `x`, renormalizing every
/// trial point onto the unit sphere.
pub(crate) fn nelder_mead(eval: &RankOneEvaluator, start: &[Complex64], step: f64, iters: usize) -> Minimum {
    let f = |v: &[f64]| eval.lambda_min(&to_vector(v));
    let x0 = unit_coords(&to_coords(start));
    let dim = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.clone(), f(&x0)));
    for k in 0..dim {
        let mut v = x0.clone();
        v[k] += step;
        let v = unit_coords(&v);
        let fv = f(&v);
        simplex.push((v, fv));
    }

    for _ in 0..iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let worst = simplex[dim].clone();
        let centroid: Vec<f64> =
            (0..dim).map(|j| simplex[..dim].iter().map(|(v, _)| v[j]).sum::<f64>() / dim as f64).collect();
        let along = |t: f64| -> Vec<f64> {
            unit_coords(&centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect::<Vec<_>>())
        };
        let refl = along(1.0);
        let fr = f(&refl);
        if fr < simplex[0].1 {
            let exp = along(2.0);
            let fe = f(&exp);
            simplex[dim] = if fe < fr { (exp, fe) } else { (refl, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (refl, fr);
        } else {
            let (cand, fc) = if fr < worst.1 {
                let c = along(0.5);
                let fc = f(&c);
                (c, fc)
            } else {
                let c = along(-0.5);
                let fc = f(&c);
                (c, fc)
            };
            if fc < worst.1.min(fr) {
                simplex[dim] = (cand, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let v: Vec<f64> = best.iter().zip(&entry.0).map(|(b, x)| b + 0.5 * (x - b)).collect();
                    let v = unit_coords(&v);
                    let fv = f(&v);
                    *entry = (v, fv);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let x = normalize(&to_vector(&simplex[0].0)).expect("unit simplex vertex");
    let (lambda_min, _) = eval.lambda_min_exact(&x);
    Minimum { x, lambda_min }
}

/// Best `(x, λ_min(m(x x*)))` over `restarts` seeded Nelder–Mead runs of
/// `iters` iterations each, started from random unit vectors.
pub fn minimize_lambda_min(map: &ComplexMap, restarts: usize, iters: usize, seed: u64) -> Minimum {
    let eval = RankOneEvaluator::new(map);
    minimize_with(&eval, restarts, iters, seed)
}

pub(crate) fn minimize_with(eval: &RankOneEvaluator, restarts: usize, iters: usize, seed: u64) -> Minimum {
    let n = eval.dim();
    (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, RESTART_STREAM + r as u64);
            let start = random_unit_vector(&mut rng, n);
            (r, nelder_mead(eval, &start, 0.25, iters.max(1)))
        })
        .min_by(|a, b| a.1.lambda_min.total_cmp(&b.1.lambda_min).then(a.0.cmp(&b.0)))
        .map(|(_, m)| m)
        .expect("at least one restart")
}
