//! Aggregated verification runs and their text rendering.

use std::fmt::Write as _;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::Result;
use crate::forms::{choi_form, form_from_map, map_from_form};
use crate::maps::{BuiltinMap, ComplexMap, MapSpec, SymmetricRestriction};
use crate::matrix::rank_one_projector;
use crate::positivity::{
    perturbation_extremality_probe, psi3_positivity_certificate, ExtremalityEvidence, PerturbationConfig,
    Psi3Certificate,
};
use crate::replay::{cross_validate, replay_choi_extremality, CrossValidation};

/// The vector `x` with `det Ψ₂(x x*) = -25`.
pub const PSI2_WITNESS: [(f64, f64); 3] = [(1.0, 0.0), (2.0, -1.0), (-1.0, -1.0)];

/// Settings for [`verify_paper`].
#[derive(Clone, Debug)]
pub struct PaperConfig {
    pub seed: u64,
    pub tol: f64,
    /// Random vectors per `ε` in the perturbation probe.
    pub probe_samples: u64,
    /// Sample points of the Ψ₃ certificate.
    pub cert_samples: usize,
    /// Rational points of the exact/numeric cross-check.
    pub cross_points: usize,
    /// Replaces the builtin Ψ₂ in the counterexample check.
    pub psi2: Option<ComplexMap>,
}

impl Default for PaperConfig {
    fn default() -> Self {
        Self { seed: 42, tol: 1e-10, probe_samples: 10_000, cert_samples: 10_000, cross_points: 50, psi2: None }
    }
}

/// One named check: its verdict, its data when it ran, and the error that
/// stopped it otherwise.
#[derive(Clone, Debug, Serialize)]
pub struct Section<T> {
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl<T> Section<T> {
    fn from_result(name: &'static str, r: Result<T>, judge: impl FnOnce(&T) -> (bool, String)) -> Self {
        match r {
            Ok(data) => {
                let (passed, summary) = judge(&data);
                Self { name, passed, summary, data: Some(data), error: None }
            }
            Err(e) => Self { name, passed: false, summary: "error".into(), data: None, error: Some(e.to_string()) },
        }
    }

    fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        match &self.error {
            Some(e) => format!("{verdict}  {}: {e}", self.name),
            None => format!("{verdict}  {}: {}", self.name, self.summary),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplaySummary {
    pub steps: usize,
    pub cases_concluded: usize,
    pub cases: usize,
    pub conclusion: bool,
    pub milestones: Vec<crate::replay::Milestone>,
    pub cross_validation: CrossValidation,
}

#[derive(Clone, Debug, Serialize)]
pub struct Psi2Check {
    pub x: Vec<Complex64>,
    pub determinant: Complex64,
    pub expected: f64,
    pub is_psd: bool,
    pub lambda_min: f64,
    pub witness: Option<Vec<Complex64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormRoundTrip {
    pub form_matches: bool,
    pub inverse_matches: bool,
    pub exact_round_trip: bool,
    pub terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropositionRow {
    pub map: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CpRow {
    pub map: &'static str,
    pub choi_lambda_min: f64,
    pub partial_transpose_lambda_min: f64,
    pub cp: bool,
    pub co_cp: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PaperReport {
    pub seed: u64,
    pub replay: Section<ReplaySummary>,
    pub psi2_counterexample: Section<Psi2Check>,
    pub psi3_certificate: Section<Psi3Certificate>,
    pub psi1_non_extremality: Section<ExtremalityEvidence>,
    pub form_round_trip: Section<FormRoundTrip>,
    pub proposition: Section<Vec<PropositionRow>>,
    pub cp_co_cp: Section<Vec<CpRow>>,
    pub passed: bool,
}

impl PaperReport {
    fn lines(&self) -> Vec<String> {
        vec![
            self.replay.line(),
            self.psi2_counterexample.line(),
            self.psi3_certificate.line(),
            self.psi1_non_extremality.line(),
            self.form_round_trip.line(),
            self.proposition.line(),
            self.cp_co_cp.line(),
        ]
    }

    /// Names of the failing sections.
    pub fn failures(&self) -> Vec<&'static str> {
        let all = [
            (self.replay.name, self.replay.passed),
            (self.psi2_counterexample.name, self.psi2_counterexample.passed),
            (self.psi3_certificate.name, self.psi3_certificate.passed),
            (self.psi1_non_extremality.name, self.psi1_non_extremality.passed),
            (self.form_round_trip.name, self.form_round_trip.passed),
            (self.proposition.name, self.proposition.passed),
            (self.cp_co_cp.name, self.cp_co_cp.passed),
        ];
        all.into_iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in self.lines() {
            let _ = writeln!(out, "{l}");
        }
        let _ = writeln!(out, "overall: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn psi2_vector() -> Vec<Complex64> {
    PSI2_WITNESS.iter().map(|&(re, im)| Complex64::new(re, im)).collect()
}

pub fn check_replay(cross_points: usize, seed: u64) -> Section<ReplaySummary> {
    let run = || -> Result<ReplaySummary> {
        let r = replay_choi_extremality()?;
        Ok(ReplaySummary {
            steps: r.steps.len(),
            cases_concluded: r.cases.iter().filter(|c| c.concluded).count(),
            cases: r.cases.len(),
            conclusion: r.conclusion,
            milestones: r.milestones,
            cross_validation: cross_validate(cross_points, seed)?,
        })
    };
    Section::from_result("replay certificate", run(), |s| {
        let cv = &s.cross_validation;
        let dev = cv.max_apply_deviation.max(cv.max_minor_deviation);
        (
            s.conclusion && dev <= 1e-9,
            format!(
                "{} steps, {}/{} cases concluded, φ1 = λΦ; cross-check at {} points max deviation {dev:.1e}",
                s.steps, s.cases_concluded, s.cases, cv.points
            ),
        )
    })
}

/// `det Ψ₂(X[1, 2-i, -1-i])` against -25, and the PSD test on the same image.
pub fn check_psi2(psi2: &ComplexMap, tol: f64) -> Section<Psi2Check> {
    let run = || -> Result<Psi2Check> {
        let x = psi2_vector();
        let img = psi2.apply(&rank_one_projector(&x)?)?;
        let v = img.is_psd(tol)?;
        Ok(Psi2Check {
            x,
            determinant: img.determinant(),
            expected: -25.0,
            is_psd: v.is_psd,
            lambda_min: v.lambda_min,
            witness: v.witness,
        })
    };
    Section::from_result("Ψ2 counterexample", run(), |c| {
        let ok = (c.determinant - Complex64::new(c.expected, 0.0)).norm() <= 1e-9 && !c.is_psd;
        (ok, format!("det = {:.6}, λ_min = {:.6}, psd = {}", c.determinant.re, c.lambda_min, c.is_psd))
    })
}

pub fn check_psi3(samples: usize, seed: u64) -> Section<Psi3Certificate> {
    Section::from_result("Ψ3 certificate", psi3_positivity_certificate(samples, seed), |c| {
        (
            true,
            format!(
                "{} points, minor deviation {:.1e}, det deviation {:.1e}, bound slack {:.1e}",
                c.samples, c.max_minor_deviation, c.max_det_deviation, c.min_bound_slack
            ),
        )
    })
}

/// `½(Φ∘t - Φ)`, the direction joining Ψ₁ to `Φ∘t`.
pub fn transpose_difference() -> ComplexMap {
    let phi = ComplexMap::builtin(BuiltinMap::Choi);
    phi.compose_transpose().sub(&phi).expect("same dimension").scale(&Complex64::new(0.5, 0.0))
}

pub fn check_psi1(cfg: &PerturbationConfig) -> Section<ExtremalityEvidence> {
    let psi1 = ComplexMap::builtin(BuiltinMap::Psi1);
    Section::from_result(
        "Ψ1 non-extremality",
        perturbation_extremality_probe(&psi1, &transpose_difference(), cfg),
        |e| {
            (
                e.max_epsilon >= 0.95 && !e.proportional,
                format!("max ε = {:.4} along ½(Φ∘t - Φ), proportional = {}", e.max_epsilon, e.proportional),
            )
        },
    )
}

pub fn check_forms() -> Section<FormRoundTrip> {
    let run = || -> Result<FormRoundTrip> {
        let restriction = ComplexMap::builtin(BuiltinMap::Choi).restrict_to_symmetric(0.0)?;
        let form = form_from_map(&restriction);
        let exact: SymmetricRestriction<BigRational> = map_from_form(&choi_form::<BigRational>());
        Ok(FormRoundTrip {
            form_matches: form == choi_form::<f64>(),
            inverse_matches: map_from_form(&form) == restriction,
            exact_round_trip: form_from_map(&exact) == choi_form::<BigRational>(),
            terms: form.terms().count(),
        })
    };
    Section::from_result("form round trip", run(), |f| {
        (
            f.form_matches && f.inverse_matches && f.exact_round_trip,
            format!(
                "Φ on symmetric matrices gives the Choi form ({} terms), inverse exact = {}",
                f.terms, f.inverse_matches
            ),
        )
    })
}

pub fn check_proposition(tol: f64) -> Section<Vec<PropositionRow>> {
    let run = || -> Result<Vec<PropositionRow>> {
        BuiltinMap::ALL
            .iter()
            .map(|m| {
                Ok(PropositionRow { map: m.name(), holds: ComplexMap::builtin(*m).proposition_hermitian_check(tol)? })
            })
            .collect()
    };
    Section::from_result("hermiticity proposition", run(), |rows| {
        (
            rows.iter().all(|r| r.holds),
            format!("holds for {}/{} builtins", rows.iter().filter(|r| r.holds).count(), rows.len()),
        )
    })
}

pub fn cp_row(which: BuiltinMap, tol: f64) -> Result<CpRow> {
    let m = ComplexMap::builtin(which);
    let c = m.choi_matrix().is_psd(tol)?;
    let p = m.compose_transpose().choi_matrix().is_psd(tol)?;
    Ok(CpRow {
        map: which.name(),
        choi_lambda_min: c.lambda_min,
        partial_transpose_lambda_min: p.lambda_min,
        cp: c.is_psd,
        co_cp: p.is_psd,
    })
}

pub fn check_cp(tol: f64) -> Section<Vec<CpRow>> {
    let run = || -> Result<Vec<CpRow>> {
        [BuiltinMap::Choi, BuiltinMap::Identity, BuiltinMap::Transpose].into_iter().map(|m| cp_row(m, tol)).collect()
    };
    Section::from_result("CP / co-CP", run(), |rows| {
        let phi = &rows[0];
        let ok = phi.choi_lambda_min < -1e-6
            && phi.partial_transpose_lambda_min < -1e-6
            && rows[1].cp
            && rows[2].co_cp
            && !rows[2].cp;
        (
            ok,
            format!(
                "Φ: λ_min(C) = {:.4}, λ_min(C∘t) = {:.4}; identity CP = {}; transpose co-CP = {}, CP = {}",
                phi.choi_lambda_min, phi.partial_transpose_lambda_min, rows[1].cp, rows[2].co_cp, rows[2].cp
            ),
        )
    })
}

/// Runs every check; `passed` is their conjunction.
pub fn verify_paper(cfg: &PaperConfig) -> PaperReport {
    let psi2 = cfg.psi2.clone().unwrap_or_else(|| ComplexMap::builtin(BuiltinMap::Psi2));
    let probe = PerturbationConfig { samples: cfg.probe_samples, seed: cfg.seed, tol: cfg.tol, ..Default::default() };
    let mut report = PaperReport {
        seed: cfg.seed,
        replay: check_replay(cfg.cross_points, cfg.seed),
        psi2_counterexample: check_psi2(&psi2, cfg.tol),
        psi3_certificate: check_psi3(cfg.cert_samples, cfg.seed),
        psi1_non_extremality: check_psi1(&probe),
        form_round_trip: check_forms(),
        proposition: check_proposition(cfg.tol),
        cp_co_cp: check_cp(cfg.tol),
        passed: false,
    };
    report.passed = report.failures().is_empty();
    report
}

/// JSON map spec of a builtin, for editing and feeding back through `--map`.
pub fn builtin_spec(which: BuiltinMap) -> MapSpec {
    MapSpec::from_map(&ComplexMap::builtin(which))
}
