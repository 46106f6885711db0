use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::minimize::nelder_mead;
use super::sampling::{random_unit_vector, sample_positivity_with_probes, stream_rng, RankOneEvaluator};
use crate::error::{Error, Result};
use crate::maps::{ComplexMap, MapSpec};

/// Stream offset for the starting points of the base-map anchor search.
const ANCHOR_STREAM: u64 = 1 << 41;

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationConfig {
    pub eps_grid: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
    /// Bisection steps between the last passing and first failing grid point.
    pub refine_steps: usize,
    /// Local searches on the base map whose end points become probes.
    pub anchor_searches: usize,
    pub polish_iters: usize,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        Self {
            eps_grid: geometric_grid(1e-4, 2.0, 40),
            samples: 10_000,
            seed: 42,
            tol: 1e-10,
            refine_steps: 12,
            anchor_searches: 8,
            polish_iters: 150,
        }
    }
}

/// `count` points from `lo` to `hi` with constant ratio.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let ratio = (hi / lo).powf(1.0 / (count - 1) as f64);
            (0..count).map(|k| if k + 1 == count { hi } else { lo * ratio.powi(k as i32) }).collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonVerdict {
    pub epsilon: f64,
    /// Least eigenvalue found for `map + ε D` and `map - ε D`; `None` when
    /// no violation was found.
    pub plus_violation: Option<f64>,
    pub minus_violation: Option<f64>,
    pub passed: bool,
    /// Point added by bisection rather than taken from the grid.
    pub refined: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalityEvidence {
    #[serde(serialize_with = "as_spec")]
    pub direction: ComplexMap,
    pub max_epsilon: f64,
    pub proportional: bool,
    pub verdict_per_epsilon: Vec<EpsilonVerdict>,
}

fn as_spec<S: Serializer>(m: &ComplexMap, s: S) -> std::result::Result<S::Ok, S::Error> {
    MapSpec::from_map(m).serialize(s)
}

/// Whether `d = c·m` for some real `c`, within `tol` relative to `d`.
pub fn is_proportional(m: &ComplexMap, d: &ComplexMap, tol: f64) -> bool {
    let dot = |a: &ComplexMap, b: &ComplexMap| -> f64 {
        a.images()
            .iter()
            .zip(b.images())
            .flat_map(|(x, y)| x.entries().iter().zip(y.entries()))
            .map(|(p, q)| (p.conj() * q).re)
            .sum()
    };
    let mm = dot(m, m);
    if mm == 0.0 {
        return false;
    }
    let c = dot(m, d) / mm;
    d.max_deviation(&m.scale(&Complex64::new(c, 0.0))) <= tol * (1.0 + d_scale(d))
}

fn d_scale(d: &ComplexMap) -> f64 {
    d.images().iter().fold(0.0, |a, m| a.max(m.max_abs()))
}

/// Vectors whose entries are `1` or a power of `i`, first entry `1`, plus the
/// standard basis: the places where maps like the Choi map touch zero.
fn lattice_probes(n: usize) -> Vec<Vec<Complex64>> {
    let units =
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)];
    let mut out: Vec<Vec<Complex64>> =
        (0..n).map(|k| (0..n).map(|j| Complex64::new(f64::from(u8::from(j == k)), 0.0)).collect()).collect();
    let combos = 4usize.pow(n as u32 - 1);
    for code in 0..combos {
        let mut v = vec![units[0]];
        let mut c = code;
        for _ in 1..n {
            v.push(units[c % 4]);
            c /= 4;
        }
        out.push(v);
    }
    out
}

struct Tester<'a> {
    map: &'a ComplexMap,
    direction: &'a ComplexMap,
    probes: Vec<Vec<Complex64>>,
    cfg: &'a PerturbationConfig,
}

impl Tester<'_> {
    /// Least eigenvalue found below `-tol` for `map + sign·ε·D`, if any.
    fn violation(&self, eps: f64, sign: f64) -> Option<f64> {
        let m = self.map.add(&self.direction.scale(&Complex64::new(sign * eps, 0.0))).expect("same dimension");
        let v = sample_positivity_with_probes(&m, &self.probes, self.cfg.samples, self.cfg.seed, self.cfg.tol);
        if let Some(w) = v.witness {
            return Some(w.lambda_min);
        }
        let eval = RankOneEvaluator::new(&m);
        let mut starts: Vec<(f64, &Vec<Complex64>)> = self.probes.iter().map(|p| (eval.lambda_min(p), p)).collect();
        starts.sort_by(|a, b| a.0.total_cmp(&b.0));
        starts
            .iter()
            .take(6)
            .map(|(_, p)| nelder_mead(&eval, p, 0.05, self.cfg.polish_iters).lambda_min)
            .filter(|&l| l < -self.cfg.tol)
            .min_by(f64::total_cmp)
    }

    fn verdict(&self, eps: f64, refined: bool) -> EpsilonVerdict {
        let plus = self.violation(eps, 1.0);
        let minus = if plus.is_none() { self.violation(eps, -1.0) } else { None };
        EpsilonVerdict {
            epsilon: eps,
            plus_violation: plus,
            minus_violation: minus,
            passed: plus.is_none() && minus.is_none(),
            refined,
        }
    }
}

/// Scans `eps_grid` upward for the largest `ε` with both `map ± ε·D`
/// passing the sampling test, then bisects towards the first failure.
pub fn perturbation_extremality_probe(
    map: &ComplexMap,
    direction: &ComplexMap,
    cfg: &PerturbationConfig,
) -> Result<ExtremalityEvidence> {
    if direction.dim() != map.dim() {
        return Err(Error::Dimension { expected: map.dim(), found: direction.dim() });
    }
    if !direction.preserves_hermitian(1e-12) {
        return Err(Error::Precondition("direction does not preserve hermitian matrices".into()));
    }
    if d_scale(direction) == 0.0 {
        return Err(Error::Precondition("direction is the zero map".into()));
    }
    let n = map.dim();
    let mut probes = lattice_probes(n);
    let base = RankOneEvaluator::new(map);
    for r in 0..cfg.anchor_searches {
        let mut rng = stream_rng(cfg.seed, ANCHOR_STREAM + r as u64);
        let start = random_unit_vector(&mut rng, n);
        probes.push(nelder_mead(&base, &start, 0.25, 200).x);
    }
    let tester = Tester { map, direction, probes, cfg };

    let mut log = Vec::new();
    let mut best = 0.0;
    let mut first_fail = None;
    let mut grid = cfg.eps_grid.clone();
    grid.sort_by(f64::total_cmp);
    for &eps in &grid {
        let v = tester.verdict(eps, false);
        let passed = v.passed;
        log.push(v);
        if passed {
            best = eps;
        } else {
            first_fail = Some(eps);
            break;
        }
    }
    if let (Some(mut hi), true) = (first_fail, best > 0.0) {
        let mut lo = best;
        for _ in 0..cfg.refine_steps {
            let mid = 0.5 * (lo + hi);
            let v = tester.verdict(mid, true);
            if v.passed {
                lo = mid;
            } else {
                hi = mid;
            }
            log.push(v);
        }
        best = lo;
    }
    Ok(ExtremalityEvidence {
        direction: direction.clone(),
        max_epsilon: best,
        proportional: is_proportional(map, direction, 1e-9),
        verdict_per_epsilon: log,
    })
}
