//! Exact replay of the Choi map's extremality argument. A decomposition
//! `Φ = φ₁ + φ₂` into positive maps is written with unknown parameters;
//! structured probes `φ_k(X[x])` give polynomial minors that must be
//! nonnegative, and a handful of sign rules turn those into substitutions
//! until `φ₁ = λΦ` and `φ₂ = (1-λ)Φ`. Every identity is checked over the
//! rationals.

mod engine;
mod script;
mod templates;

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

pub use engine::{
    probe_minor, symbolic_probe, verify_identity, DerivationState, Fact, FactId, Milestone, Relation, Side, SymMap,
    SymMatrix, Weight,
};

use crate::error::Result;
use crate::maps::{BasisElement, HermitianBasis};
use crate::maps::{BuiltinMap, ComplexMap, LinearMap};
use crate::matrix::{ComplexMatrix, Matrix};
use crate::poly::{Bindings, MPoly, PolyComplex, Var, VarRegistry};
use crate::positivity::{stream_rng, Minor, ProbeFamily};

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error("identity `{context}` fails: expected {expected}, computed {computed}, difference {residual}")]
    IdentityMismatch { context: String, expected: String, computed: String, residual: String },

    #[error("rule {} rejected: {reason}", rule.map_or("-".to_string(), |r| r.to_string()))]
    RuleRejected { rule: Option<Rule>, reason: String },

    #[error("variable `{var}` is already bound")]
    DoubleBinding { var: String },

    #[error("cannot solve `{poly}` for `{var}`")]
    NotBindable { var: String, poly: String },

    #[error("bad template: {0}")]
    Template(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Stage {
    /// Diagonal images fixed.
    A,
    /// Symmetric images fixed.
    B,
    /// Antisymmetric images fixed.
    C,
    /// Full family with `a_k, α, β, γ` free.
    D,
    /// Case analysis on `λ`.
    E,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Range of `λ` a step is valid on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaCase {
    Closed,
    Zero,
    One,
    Open,
}

impl LambdaCase {
    pub fn contains_zero(self) -> bool {
        matches!(self, LambdaCase::Closed | LambdaCase::Zero)
    }

    pub fn contains_one(self) -> bool {
        matches!(self, LambdaCase::Closed | LambdaCase::One)
    }
}

impl fmt::Display for LambdaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LambdaCase::Closed => "0 ≤ λ ≤ 1",
            LambdaCase::Zero => "λ = 0",
            LambdaCase::One => "λ = 1",
            LambdaCase::Open => "0 < λ < 1",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    VanishingSos,
    ForcedZeroLinearCoeff,
    LeadingCoeffNonneg,
    SqueezeToZero,
    DivisibleByT2,
    /// `w_j·g = 0` for weights not vanishing together forces `g = 0`.
    WeightedVanishing,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Axiom,
    Definition,
    Check,
    Probe,
    Rule,
    Case,
    Conclusion,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Step {
    pub index: usize,
    pub stage: Stage,
    pub case: LambdaCase,
    pub kind: StepKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<Rule>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub substitution: Vec<String>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = format!("{:?}", self.kind).to_lowercase();
        write!(f, "{:>3} [{} | {}] {kind}", self.index, self.stage, self.case)?;
        if let Some(p) = &self.probe {
            write!(f, " | probe {p}")?;
        }
        if let Some(i) = &self.identity {
            write!(f, " | {i}")?;
        }
        if let Some(r) = &self.rule {
            write!(f, " | rule {r}")?;
        }
        if !self.substitution.is_empty() {
            write!(f, " | {}", self.substitution.join(", "))?;
        }
        if !self.note.is_empty() {
            write!(f, " | {}", self.note)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseOutcome {
    pub case: LambdaCase,
    pub concluded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub steps: Vec<Step>,
    /// Parameter values at named points of the derivation.
    pub milestones: Vec<Milestone>,
    pub cases: Vec<CaseOutcome>,
    /// `φ₁ = λΦ`, `φ₂ = (1-λ)Φ` verified on all basis images in every case.
    pub conclusion: bool,
}

impl CertificateReport {
    pub fn milestone(&self, name: &str, var: &str) -> Option<&str> {
        self.milestones.iter().find(|m| m.name == name)?.values.get(var).map(String::as_str)
    }

    pub fn axiom_steps(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(|s| s.kind == StepKind::Axiom)
    }

    /// One line per step.
    pub fn to_text(&self) -> String {
        let mut out: String = self.steps.iter().map(|s| format!("{s}\n")).collect();
        out.push_str(&format!("conclusion: {}\n", if self.conclusion { "verified" } else { "not verified" }));
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Runs the scripted derivation; any failed identity or rule aborts it.
pub fn replay_choi_extremality() -> Result<CertificateReport> {
    Ok(script::run()?)
}

/// Basis images known at one stage of the derivation.
#[derive(Clone, Debug, PartialEq)]
pub struct StageMaps {
    pub stage: Stage,
    pub elements: Vec<BasisElement>,
    pub phi1: Vec<SymMatrix>,
    pub phi2: Vec<SymMatrix>,
}

impl StageMaps {
    /// Both maps, once all nine images are known.
    pub fn maps(&self) -> Option<(SymMap, SymMap)> {
        if self.elements.len() != 9 {
            return None;
        }
        Some((LinearMap::from_images(3, self.phi1.clone()).ok()?, LinearMap::from_images(3, self.phi2.clone()).ok()?))
    }

    /// `φ₁(B) + φ₂(B) = Φ(B)` for every known `B`.
    pub fn conservation_holds(&self) -> bool {
        let choi = BuiltinMap::Choi.build_generic::<PolyComplex>();
        self.elements
            .iter()
            .zip(self.phi1.iter().zip(&self.phi2))
            .all(|(&e, (a, b))| a.zip_with(b, |x, y| x.clone() + y.clone()) == *choi.image(e))
    }
}

/// The displayed images of each stage with that stage's free parameters.
pub fn build_stage_maps(stage: Stage) -> Result<StageMaps> {
    let basis = HermitianBasis::new(3);
    let parse = |src: &str| engine::parse_matrix(src).map_err(crate::Error::from);
    let correlations: Bindings =
        templates::CORRELATIONS.iter().map(|(v, e)| Ok((Var::named(v)?, MPoly::parse(e)?))).collect::<Result<_>>()?;
    let count = match stage {
        Stage::A => 3,
        Stage::B => 6,
        _ => 9,
    };
    let mut phi1 = Vec::new();
    let mut phi2 = Vec::new();
    if stage == Stage::E {
        let choi = BuiltinMap::Choi.build_generic::<PolyComplex>();
        let lam = PolyComplex::real(MPoly::named("lam")?);
        let rest = PolyComplex::int(1) - lam.clone();
        phi1 = choi.images().iter().map(|m| m.scale(&lam)).collect();
        phi2 = choi.images().iter().map(|m| m.scale(&rest)).collect();
    } else {
        let h1 = templates::PHI1_H_FINAL;
        let h2 = templates::PHI2_H_FINAL;
        let one = templates::PHI1_E.iter().chain(&templates::PHI1_S).chain(&h1);
        let two = templates::PHI2_E.iter().chain(&templates::PHI2_S).chain(&h2);
        for (k, (a, b)) in one.zip(two).take(count).enumerate() {
            let (mut a, mut b) = (parse(a)?, parse(b)?);
            if stage >= Stage::C && (3..6).contains(&k) {
                a = a.map(|z| z.substitute(&correlations));
                b = b.map(|z| z.substitute(&correlations));
            }
            phi1.push(a);
            phi2.push(b);
        }
    }
    Ok(StageMaps { stage, elements: basis.elements()[..count].to_vec(), phi1, phi2 })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossValidation {
    pub points: usize,
    pub seed: u64,
    /// Largest entry difference between exact and floating-point `φ_k(X)`,
    /// relative to `max(1, |exact|)`.
    pub max_apply_deviation: f64,
    /// Same for the probe minors.
    pub max_minor_deviation: f64,
}

/// Free parameters of the stage-D family.
const STAGE_D_PARAMS: [&str; 10] =
    ["lam", "a1", "a2", "a3", "re_alpha", "im_alpha", "re_beta", "im_beta", "re_gamma", "im_gamma"];

fn random_rational(rng: &mut impl Rng) -> num_rational::BigRational {
    crate::poly::rat(rng.random_range(-12..=12)) / crate::poly::rat(rng.random_range(1..=6))
}

fn eval_exact(p: &MPoly, point: &Bindings) -> f64 {
    use num_traits::ToPrimitive;
    p.substitute(point).as_constant().and_then(|c| c.to_f64()).unwrap_or(f64::NAN)
}

fn numeric_map(m: &SymMap, point: &Bindings) -> ComplexMap {
    let images = m
        .images()
        .iter()
        .map(|img| img.map(|z| Complex64::new(eval_exact(&z.re, point), eval_exact(&z.im, point))))
        .collect();
    LinearMap::from_images(3, images).expect("nine 3x3 images")
}

/// Instantiates the stage-D maps at random rational points and compares
/// exact symbolic values with the floating-point engine.
pub fn cross_validate(points: usize, seed: u64) -> Result<CrossValidation> {
    let (phi1, phi2) = build_stage_maps(Stage::D)?.maps().expect("stage D is complete");
    let families = ["X[1,t,si]", "X[t,1,si]", "X[si,1,t]", "X[1,±1,±1]"];
    let minors = [Minor::Principal(1), Minor::Principal(2), Minor::Principal(3), Minor::Det];
    let mut symbolic = Vec::new();
    for (side, map) in [&phi1, &phi2].into_iter().enumerate() {
        for fam in families {
            let fam = ProbeFamily::parse(fam)?;
            for minor in minors {
                symbolic.push((side, fam.clone(), minor, probe_minor(map, &fam, minor)?));
            }
        }
    }
    let reg = VarRegistry::standard();
    let mut rng = stream_rng(seed, 0);
    let mut out = CrossValidation { points, seed, max_apply_deviation: 0.0, max_minor_deviation: 0.0 };
    for _ in 0..points {
        let mut point: Bindings = Bindings::new();
        for name in STAGE_D_PARAMS.iter().chain(&["t", "s"]) {
            let v = if *name == "lam" {
                crate::poly::rat(rng.random_range(1..=9)) / crate::poly::rat(10)
            } else {
                random_rational(&mut rng)
            };
            point.insert(reg.lookup(name)?, MPoly::constant(v));
        }
        let value = |n: &str| eval_exact(&MPoly::named(n).expect("registered"), &point);
        let (t, s) = (value("t"), value("s"));
        let x_exact: Matrix<PolyComplex> = Matrix::from_fn(3, |_, _| {
            PolyComplex::new(MPoly::constant(random_rational(&mut rng)), MPoly::constant(random_rational(&mut rng)))
        });
        let x_num: ComplexMatrix =
            x_exact.map(|z| Complex64::new(eval_exact(&z.re, &point), eval_exact(&z.im, &point)));
        let numeric = [numeric_map(&phi1, &point), numeric_map(&phi2, &point)];
        for (map, num_map) in [&phi1, &phi2].into_iter().zip(&numeric) {
            let exact = map.apply(&x_exact)?;
            let num = num_map.apply(&x_num)?;
            for (e, n) in exact.entries().iter().zip(num.entries()) {
                let e = Complex64::new(eval_exact(&e.re, &point), eval_exact(&e.im, &point));
                out.max_apply_deviation = out.max_apply_deviation.max((e - n).norm() / e.norm().max(1.0));
            }
        }
        for (side, fam, minor, poly) in &symbolic {
            let num_map = &numeric[*side];
            let mut value = 0.0;
            for inst in fam.instances() {
                value += minor.of(&num_map.apply(&inst.matrix(t, s))?)?;
            }
            let exact = eval_exact(poly, &point);
            out.max_minor_deviation = out.max_minor_deviation.max((exact - value).abs() / exact.abs().max(1.0));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
