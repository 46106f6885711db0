use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::templates;
use super::{LambdaCase, ReplayError, Rule, Stage, Step, StepKind};
use crate::maps::{BasisElement, HermitianBasis};
use crate::maps::{BuiltinMap, LinearMap};
use crate::matrix::Matrix;
use crate::poly::{rat, Bindings, MPoly, PolyComplex, Var, VarRegistry};
use crate::positivity::{Minor, ProbeFamily, ProbeVar};
use crate::scalar::ComplexRing;

pub type SymMatrix = Matrix<PolyComplex>;
pub type SymMap = LinearMap<PolyComplex>;

type Res<T> = std::result::Result<T, ReplayError>;

/// Which summand of `Φ = φ₁ + φ₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    One,
    Two,
}

impl Side {
    fn idx(self) -> usize {
        match self {
            Side::One => 0,
            Side::Two => 1,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::One => "φ1",
            Side::Two => "φ2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// The value is `>= 0` for every choice of the quantified variables.
    Nonneg,
    /// The value is `0`.
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fact {
    pub desc: String,
    #[serde(serialize_with = "as_display")]
    pub poly: MPoly,
    pub relation: Relation,
    #[serde(serialize_with = "vars_display")]
    pub forall: Vec<Var>,
}

fn as_display<S: serde::Serializer, T: fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn vars_display<S: serde::Serializer>(v: &[Var], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.name()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactId(usize);

/// `c·λ^p·(1-λ)^q`, the only weights the sign rules accept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight {
    pub c: BigRational,
    pub p: u32,
    pub q: u32,
}

impl Weight {
    pub fn new(c: i64, p: u32, q: u32) -> Self {
        Self { c: rat(c), p, q }
    }

    pub fn one() -> Self {
        Self::new(1, 0, 0)
    }

    pub fn lam() -> Self {
        Self::new(1, 1, 0)
    }

    pub fn one_minus_lam() -> Self {
        Self::new(1, 0, 1)
    }

    pub fn poly(&self) -> MPoly {
        let lam = MPoly::named("lam").expect("lam is registered");
        (lam.pow(self.p) * (MPoly::one() - lam).pow(self.q)).scale(&self.c)
    }

    fn nonzero_at_zero(&self) -> bool {
        self.p == 0
    }

    fn nonzero_at_one(&self) -> bool {
        self.q == 0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let bare = self.p == 0 && self.q == 0;
        if bare || self.c.abs() != BigRational::one() {
            parts.push(self.c.to_string());
        } else if self.c.is_negative() {
            f.write_str("-")?;
        }
        match self.p {
            0 => {}
            1 => parts.push("λ".into()),
            p => parts.push(format!("λ^{p}")),
        }
        match self.q {
            0 => {}
            1 => parts.push("(1 - λ)".into()),
            q => parts.push(format!("(1 - λ)^{q}")),
        }
        f.write_str(&parts.join("·"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Milestone {
    pub name: String,
    pub values: BTreeMap<String, String>,
}

pub(crate) fn parse_poly(src: &str) -> Res<MPoly> {
    MPoly::parse(src).map_err(|e| ReplayError::Template(format!("`{src}`: {e}")))
}

pub(crate) fn parse_matrix(src: &str) -> Res<SymMatrix> {
    let rows = src
        .split(';')
        .map(|r| r.split(',').map(|e| PolyComplex::parse(e.trim())).collect::<crate::Result<Vec<_>>>())
        .collect::<crate::Result<Vec<_>>>()
        .map_err(|e| ReplayError::Template(format!("`{src}`: {e}")))?;
    Matrix::from_rows(rows).map_err(|e| ReplayError::Template(format!("`{src}`: {e}")))
}

fn var(name: &str) -> Var {
    Var::named(name).expect("registered variable")
}

fn subst_matrix(m: &SymMatrix, b: &Bindings) -> SymMatrix {
    m.map(|e| e.substitute(b))
}

fn identity_mismatch(
    context: String,
    expected: &dyn fmt::Display,
    computed: &dyn fmt::Display,
    residual: &dyn fmt::Display,
) -> ReplayError {
    ReplayError::IdentityMismatch {
        context,
        expected: expected.to_string(),
        computed: computed.to_string(),
        residual: residual.to_string(),
    }
}

/// `computed == expected` exactly, or the difference as the error.
pub fn verify_identity(context: &str, computed: &MPoly, expected: &MPoly) -> Res<()> {
    let diff = computed - expected;
    if diff.is_zero() {
        Ok(())
    } else {
        Err(identity_mismatch(context.to_string(), expected, computed, &diff))
    }
}

fn verify_matrix(context: &str, computed: &SymMatrix, expected: &SymMatrix) -> Res<()> {
    for r in 0..3 {
        for c in 0..3 {
            let (a, b) = (&computed[(r, c)], &expected[(r, c)]);
            if a != b {
                let diff = a.clone() - b.clone();
                return Err(identity_mismatch(format!("{context}, entry ({},{})", r + 1, c + 1), b, a, &diff));
            }
        }
    }
    Ok(())
}

fn minor_label(minor: Minor) -> String {
    match minor {
        Minor::Principal(k) => format!("d{k}"),
        Minor::Det => "det".into(),
    }
}

/// The probe matrices `map(X)` for every sign choice of `family`.
pub fn symbolic_probe(map: &SymMap, family: &ProbeFamily) -> crate::Result<Vec<SymMatrix>> {
    family.instances().iter().map(|inst| map.apply(&inst.matrix_poly())).collect()
}

/// Sum over the family's sign choices of a minor of `map(X)`; real by
/// hermiticity.
pub fn probe_minor(map: &SymMap, family: &ProbeFamily, minor: Minor) -> Res<MPoly> {
    let mut total = PolyComplex::default();
    for m in symbolic_probe(map, family).map_err(|e| ReplayError::Template(e.to_string()))? {
        let v = match minor {
            Minor::Principal(k) => m.principal_minor(k).map_err(|e| ReplayError::Template(e.to_string()))?,
            Minor::Det => m.det_cofactor(),
        };
        total = total + v;
    }
    if !total.im.is_zero() {
        return Err(ReplayError::RuleRejected {
            rule: None,
            reason: format!("{} of {family} has imaginary part {}", minor_label(minor), total.im),
        });
    }
    Ok(total.re)
}

/// Progressive state of the scripted derivation: the two generic map
/// templates, the substitutions found so far, derived facts, and the log.
#[derive(Clone, Debug)]
pub struct DerivationState {
    templates: [Vec<SymMatrix>; 2],
    choi: Vec<SymMatrix>,
    bindings: Bindings,
    stage: Stage,
    case: LambdaCase,
    facts: Vec<Fact>,
    steps: Vec<Step>,
    milestones: Vec<Milestone>,
}

impl DerivationState {
    /// Generic `φ₁, φ₂` in which no parameter has been eliminated.
    pub fn new() -> Res<Self> {
        let build = |e: &[&str; 3], s: &[&str; 3], h: &[&str; 3]| -> Res<Vec<SymMatrix>> {
            e.iter().chain(s).chain(h).map(|src| parse_matrix(src)).collect()
        };
        let one = build(&templates::PHI1_E, &templates::PHI1_S, &templates::PHI1_H)?;
        let two = build(&templates::PHI2_E, &templates::PHI2_S, &templates::PHI2_H)?;
        let choi = BuiltinMap::Choi.build_generic::<PolyComplex>().images().to_vec();
        Ok(Self {
            templates: [one, two],
            choi,
            bindings: Bindings::new(),
            stage: Stage::A,
            case: LambdaCase::Closed,
            facts: Vec::new(),
            steps: Vec::new(),
            milestones: Vec::new(),
        })
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn case(&self) -> LambdaCase {
        self.case
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn milestones(&self) -> &[Milestone] {
        &self.milestones
    }

    pub fn bindings(&self) -> &Bindings {
        &self.bindings
    }

    pub fn fact(&self, id: FactId) -> &Fact {
        &self.facts[id.0]
    }

    pub fn set_stage(&mut self, stage: Stage) {
        self.stage = stage;
    }

    fn push(&mut self, kind: StepKind) -> &mut Step {
        let step = Step {
            index: self.steps.len() + 1,
            stage: self.stage,
            case: self.case,
            kind,
            probe: None,
            identity: None,
            rule: None,
            substitution: Vec::new(),
            note: String::new(),
        };
        self.steps.push(step);
        self.steps.last_mut().expect("just pushed")
    }

    fn add_fact(&mut self, fact: Fact) -> FactId {
        self.facts.push(fact);
        FactId(self.facts.len() - 1)
    }

    /// Records a standard fact the derivation uses without re-deriving it.
    pub fn axiom(&mut self, note: &str) {
        self.push(StepKind::Axiom).note = note.to_string();
    }

    pub fn image(&self, side: Side, e: BasisElement) -> SymMatrix {
        let pos = HermitianBasis::new(3).position(e).expect("basis element of M_3");
        subst_matrix(&self.templates[side.idx()][pos], &self.bindings)
    }

    /// The current `φ_k` with every substitution applied.
    pub fn map(&self, side: Side) -> SymMap {
        let images = self.templates[side.idx()].iter().map(|m| subst_matrix(m, &self.bindings)).collect();
        LinearMap::from_images(3, images).expect("nine 3x3 images")
    }

    fn value_of(&self, v: Var) -> MPoly {
        self.bindings.get(&v).cloned().unwrap_or_else(|| MPoly::var(v))
    }

    fn check_conservation(&self) -> Res<()> {
        let [one, two] = [self.map(Side::One), self.map(Side::Two)];
        for (k, e) in HermitianBasis::new(3).elements().iter().enumerate() {
            let sum = one.images()[k].zip_with(&two.images()[k], |a, b| a.clone() + b.clone());
            verify_matrix(&format!("φ1({e}) + φ2({e}) = Φ({e})"), &sum, &self.choi[k])?;
        }
        Ok(())
    }

    /// Logs that `φ₁ + φ₂ = Φ` on all nine basis images.
    pub fn conservation(&mut self) -> Res<()> {
        self.check_conservation()?;
        self.push(StepKind::Check).identity = Some("φ1(B) + φ2(B) = Φ(B) for all nine B".into());
        Ok(())
    }

    /// Checks that on `E_kk` and `S_kl` the real parts of `φ₁, φ₂` are `λΦ`
    /// and `(1-λ)Φ` and that every image is hermitian.
    pub fn restriction_form(&mut self) -> Res<()> {
        let lam = PolyComplex::real(self.value_of(var("lam")));
        let one_minus = PolyComplex::int(1) - lam.clone();
        for (k, e) in HermitianBasis::new(3).elements().iter().enumerate() {
            for side in [Side::One, Side::Two] {
                let m = &self.map(side).images()[k].clone();
                verify_matrix(&format!("{side}({e}) hermitian"), &m.adjoint(), m)?;
                if matches!(e, BasisElement::Herm(..)) {
                    continue;
                }
                let w = if side == Side::One { &lam } else { &one_minus };
                let want = self.choi[k].scale(w);
                verify_matrix(&format!("Re {side}({e})"), &m.map(|z| z.re_part()), &want)?;
            }
        }
        self.push(StepKind::Check).identity =
            Some("Re φ1(B) = λΦ(B), Re φ2(B) = (1-λ)Φ(B) for B = E_kk, S_kl; all images hermitian".into());
        Ok(())
    }

    /// Compares the current image `side(B)` with a displayed matrix.
    pub fn check_image(&mut self, side: Side, e: BasisElement, expected: &str) -> Res<()> {
        let want = subst_matrix(&parse_matrix(expected)?, &self.bindings);
        let got = self.image(side, e);
        verify_matrix(&format!("{side}({e})"), &got, &want)?;
        self.push(StepKind::Check).identity = Some(format!("{side}({e}) = [{expected}]"));
        Ok(())
    }

    /// Compares `side(X[..])` for a single-instance family with a displayed matrix.
    pub fn check_probe_matrix(&mut self, side: Side, family: &str, expected: &str) -> Res<()> {
        let fam = ProbeFamily::parse(family).map_err(|e| ReplayError::Template(e.to_string()))?;
        let got = symbolic_probe(&self.map(side), &fam).map_err(|e| ReplayError::Template(e.to_string()))?;
        let want = subst_matrix(&parse_matrix(expected)?, &self.bindings);
        verify_matrix(&format!("{side}({family})"), &got[0], &want)?;
        let step = self.push(StepKind::Check);
        step.probe = Some(format!("{side}({family})"));
        step.identity = Some(format!("{side}({family}) = [{expected}]"));
        Ok(())
    }

    /// Compares `side(X)` over a general `X = (x_kl)` with an entry list.
    pub fn check_entry_list(&mut self, side: Side, entries: &[&str; 9]) -> Res<()> {
        let x = Matrix::from_fn(3, |r, c| {
            PolyComplex::real(MPoly::named(&format!("x{}{}", r + 1, c + 1)).expect("x_kl is registered"))
        });
        let got = self.map(side).apply(&x).map_err(|e| ReplayError::Template(e.to_string()))?;
        for (k, src) in entries.iter().enumerate() {
            let want = PolyComplex::parse(src)
                .map_err(|e| ReplayError::Template(format!("`{src}`: {e}")))?
                .substitute(&self.bindings);
            let (r, c) = (k / 3, k % 3);
            if got[(r, c)] != want {
                let diff = got[(r, c)].clone() - want.clone();
                return Err(identity_mismatch(format!("[{side}(X)]_{}{}", r + 1, c + 1), &want, &got[(r, c)], &diff));
            }
        }
        self.push(StepKind::Check).identity = Some(format!("[{side}(X)]_kl matches the entry list for all k, l"));
        Ok(())
    }

    /// A minor of `side(X)` summed over the family, with its identity
    /// checked against `expected` when given. The result is a fact that
    /// holds for all real values of the family's variables.
    pub fn probe(&mut self, side: Side, family: &str, minor: Minor, expected: Option<&str>) -> Res<FactId> {
        let fam = ProbeFamily::parse(family).map_err(|e| ReplayError::Template(e.to_string()))?;
        let value = probe_minor(&self.map(side), &fam, minor)?;
        let sum = if fam.instances().len() > 1 { "Σ " } else { "" };
        let desc = format!("{sum}{}({side}({family}))", minor_label(minor));
        if let Some(src) = expected {
            let want = parse_poly(src)?.substitute(&self.bindings);
            verify_identity(&desc, &value, &want)?;
        }
        let forall: Vec<Var> = [(ProbeVar::T, "t"), (ProbeVar::S, "s")]
            .iter()
            .filter(|(v, _)| fam.uses(*v))
            .map(|(_, n)| var(n))
            .collect();
        let step = self.push(StepKind::Probe);
        step.probe = Some(desc.clone());
        step.identity = Some(format!("{desc} = {value}"));
        step.note = if forall.is_empty() {
            "≥ 0 (PSD)".into()
        } else {
            format!("≥ 0 for all real {} (PSD)", forall.iter().map(|v| v.name()).collect::<Vec<_>>().join(", "))
        };
        Ok(self.add_fact(Fact { desc, poly: value, relation: Relation::Nonneg, forall }))
    }

    fn current(&self, id: FactId) -> Fact {
        let mut f = self.facts[id.0].clone();
        f.poly = f.poly.substitute(&self.bindings);
        f
    }

    fn quantified(&self, rule: Rule, id: FactId, v: &str) -> Res<(Fact, Var)> {
        let f = self.current(id);
        let x = var(v);
        if f.relation != Relation::Nonneg || !f.forall.contains(&x) {
            return Err(ReplayError::RuleRejected {
                rule: Some(rule),
                reason: format!("`{}` is not a nonnegativity fact quantified over {v}", f.desc),
            });
        }
        Ok((f, x))
    }

    /// Asserts the fact is of exact degree `degree` in `v` and divisible by `v^divisible`.
    pub fn shape(&mut self, id: FactId, v: &str, degree: u32, divisible: u32) -> Res<()> {
        let f = self.current(id);
        let x = var(v);
        let got = f.poly.degree_in(x);
        let low = (0..divisible).find(|&d| !f.poly.coeff_of(x, d).is_zero());
        if got != Some(degree) || low.is_some() {
            return Err(ReplayError::RuleRejected {
                rule: None,
                reason: format!(
                    "`{}` = {} is not of degree {degree} in {v} divisible by {v}^{divisible}",
                    f.desc, f.poly
                ),
            });
        }
        let step = self.push(StepKind::Check);
        step.probe = Some(f.desc.clone());
        step.note = match divisible {
            0 => format!("degree {degree} in {v}"),
            d => format!("degree {degree} in {v}, divisible by {v}^{d}"),
        };
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn derived(
        &mut self,
        rule: Rule,
        src: &Fact,
        desc: String,
        poly: MPoly,
        relation: Relation,
        forall: Vec<Var>,
        expected: Option<&str>,
    ) -> Res<FactId> {
        if let Some(e) = expected {
            let want = parse_poly(e)?.substitute(&self.bindings);
            verify_identity(&desc, &poly, &want)?;
        }
        let rel = match relation {
            Relation::Nonneg => "≥ 0",
            Relation::Zero => "= 0",
        };
        let step = self.push(StepKind::Rule);
        step.rule = Some(rule);
        step.probe = Some(src.desc.clone());
        step.identity = Some(format!("{desc} = {poly} {rel}"));
        Ok(self.add_fact(Fact { desc, poly, relation, forall }))
    }

    /// `p(v) >= 0` for all `v`: the leading coefficient is `>= 0` for even
    /// degree and `0` for odd degree.
    pub fn leading_coeff(&mut self, id: FactId, v: &str, expected: Option<&str>) -> Res<FactId> {
        let (f, x) = self.quantified(Rule::LeadingCoeffNonneg, id, v)?;
        let d = f.poly.degree_in(x).ok_or_else(|| ReplayError::RuleRejected {
            rule: Some(Rule::LeadingCoeffNonneg),
            reason: format!("`{}` is identically zero", f.desc),
        })?;
        let lead = f.poly.coeff_of(x, d);
        let rel = if d % 2 == 0 { Relation::Nonneg } else { Relation::Zero };
        let forall = f.forall.iter().copied().filter(|&y| y != x).collect();
        let desc = if d == 1 { format!("[{v}] {}", f.desc) } else { format!("[{v}^{d}] {}", f.desc) };
        self.derived(Rule::LeadingCoeffNonneg, &f, desc, lead, rel, forall, expected)
    }

    /// `p(v) = c₂v² + c₃v³ + .. >= 0`: dividing by `v²` and letting `v → 0`
    /// gives `c₂ >= 0`.
    pub fn divisible_t2(&mut self, id: FactId, v: &str, expected: Option<&str>) -> Res<FactId> {
        let (f, x) = self.quantified(Rule::DivisibleByT2, id, v)?;
        for d in 0..2 {
            if !f.poly.coeff_of(x, d).is_zero() {
                return Err(ReplayError::RuleRejected {
                    rule: Some(Rule::DivisibleByT2),
                    reason: format!("`{}` has nonzero {v}^{d} coefficient", f.desc),
                });
            }
        }
        let forall = f.forall.iter().copied().filter(|&y| y != x).collect();
        let c2 = f.poly.coeff_of(x, 2);
        self.derived(Rule::DivisibleByT2, &f, format!("[{v}^2] {}", f.desc), c2, Relation::Nonneg, forall, expected)
    }

    /// `p(v) >= 0` with lowest nonzero power `v^m`, `m` odd: `p` changes
    /// sign at `0` unless that coefficient vanishes.
    pub fn forced_zero_linear(&mut self, id: FactId, v: &str, expected: Option<&str>) -> Res<FactId> {
        let (f, x) = self.quantified(Rule::ForcedZeroLinearCoeff, id, v)?;
        let d = f.poly.degree_in(x).unwrap_or(0);
        let m = (0..=d).find(|&k| !f.poly.coeff_of(x, k).is_zero());
        let m = match m {
            Some(m) if m % 2 == 1 => m,
            _ => {
                return Err(ReplayError::RuleRejected {
                    rule: Some(Rule::ForcedZeroLinearCoeff),
                    reason: format!("lowest power of {v} in `{}` is not odd", f.desc),
                })
            }
        };
        let forall = f.forall.iter().copied().filter(|&y| y != x).collect();
        let desc =
            if m == 1 { format!("[{v}] {}", f.desc) } else { format!("[{v}^{m}] {} (on p/{v}^{})", f.desc, m - 1) };
        self.derived(Rule::ForcedZeroLinearCoeff, &f, desc, f.poly.coeff_of(x, m), Relation::Zero, forall, expected)
    }

    fn jointly_nonzero(&self, weights: &[&Weight]) -> bool {
        let range = self.case;
        !weights.is_empty()
            && (!range.contains_zero() || weights.iter().any(|w| w.nonzero_at_zero()))
            && (!range.contains_one() || weights.iter().any(|w| w.nonzero_at_one()))
    }

    fn ground(&self, rule: Rule, ids: &[FactId], relation: Relation) -> Res<Vec<Fact>> {
        ids.iter()
            .map(|&id| {
                let f = self.current(id);
                if f.relation != relation || !f.forall.is_empty() {
                    return Err(ReplayError::RuleRejected {
                        rule: Some(rule),
                        reason: format!("premise `{}` has the wrong form for this rule", f.desc),
                    });
                }
                Ok(f)
            })
            .collect()
    }

    fn parse_generators(&self, gens: &[(&str, &str)]) -> Res<Vec<(MPoly, Var)>> {
        gens.iter().map(|(g, t)| Ok((parse_poly(g)?.substitute(&self.bindings), var(t)))).collect()
    }

    /// `P_j = -w_j·Σ g_i²` with `w_j >= 0` on the λ range, not all zero at
    /// any point: each `g_i` vanishes; `g_i` is solved for its target.
    pub fn vanishing_sos(&mut self, ids: &[FactId], weights: &[Weight], gens: &[(&str, &str)]) -> Res<()> {
        let rule = Rule::VanishingSos;
        let premises = self.ground(rule, ids, Relation::Nonneg)?;
        let gs = self.parse_generators(gens)?;
        if weights.len() != premises.len()
            || weights.iter().any(|w| !w.c.is_positive())
            || !self.jointly_nonzero(&weights.iter().collect::<Vec<_>>())
        {
            return Err(ReplayError::RuleRejected {
                rule: Some(rule),
                reason: "weights are not jointly positive on the λ range".into(),
            });
        }
        let squares = MPoly::sum_of_squares(&gs.iter().map(|(g, _)| g.clone()).collect::<Vec<_>>());
        let mut ident = Vec::new();
        for (p, w) in premises.iter().zip(weights) {
            let rhs = -(&w.poly().substitute(&self.bindings) * &squares);
            verify_identity(&p.desc, &p.poly, &rhs).map_err(|e| reject(rule, e))?;
            ident.push(format!("{} = {}[{}]", p.desc, neg_times(w), square_list(&gs)));
        }
        let subs = self.bind_all(&gs)?;
        // soundness spot check: the premises collapse to 0 under the new bindings
        for &id in ids {
            let f = self.current(id);
            verify_identity(&format!("{} after substitution", f.desc), &f.poly, &MPoly::zero())?;
        }
        self.log_rule(rule, ident, subs, self.side_condition(weights));
        Ok(())
    }

    /// `Z_j = w_j·g = 0` with weights not simultaneously zero: `g = 0`.
    pub fn weighted_vanishing(&mut self, ids: &[FactId], weights: &[Weight], gen: (&str, &str)) -> Res<()> {
        let rule = Rule::WeightedVanishing;
        let premises = self.ground(rule, ids, Relation::Zero)?;
        let gs = self.parse_generators(&[gen])?;
        if weights.len() != premises.len()
            || weights.iter().any(|w| w.c.is_zero())
            || !self.jointly_nonzero(&weights.iter().collect::<Vec<_>>())
        {
            return Err(ReplayError::RuleRejected {
                rule: Some(rule),
                reason: "weights vanish together on the λ range".into(),
            });
        }
        let mut ident = Vec::new();
        for (p, w) in premises.iter().zip(weights) {
            let rhs = &w.poly().substitute(&self.bindings) * &gs[0].0;
            verify_identity(&p.desc, &p.poly, &rhs).map_err(|e| reject(rule, e))?;
            ident.push(format!("{} = {w}·({})", p.desc, gs[0].0));
        }
        let subs = self.bind_all(&gs)?;
        self.log_rule(rule, ident, subs, self.side_condition(weights));
        Ok(())
    }

    /// `Σ m_j P_j = -w·Σ g_i²` with `P_j >= 0`, `m_j >= 0` and `w > 0` on the
    /// λ range: the chain `0 <= Σ m_j P_j <= 0` squeezes every `g_i` to 0.
    pub fn squeeze(&mut self, ids: &[FactId], multipliers: &[Weight], w: &Weight, gens: &[(&str, &str)]) -> Res<()> {
        let rule = Rule::SqueezeToZero;
        let premises = self.ground(rule, ids, Relation::Nonneg)?;
        let gs = self.parse_generators(gens)?;
        if multipliers.len() != premises.len() || multipliers.iter().any(|m| m.c.is_negative()) {
            return Err(ReplayError::RuleRejected {
                rule: Some(rule),
                reason: "multipliers must be nonnegative".into(),
            });
        }
        if !w.c.is_positive() || !self.jointly_nonzero(&[w]) {
            return Err(ReplayError::RuleRejected {
                rule: Some(rule),
                reason: format!("{w} is not positive on {}", self.case),
            });
        }
        let combo = premises
            .iter()
            .zip(multipliers)
            .fold(MPoly::zero(), |acc, (p, m)| acc + &m.poly().substitute(&self.bindings) * &p.poly);
        let squares = MPoly::sum_of_squares(&gs.iter().map(|(g, _)| g.clone()).collect::<Vec<_>>());
        let rhs = -(&w.poly().substitute(&self.bindings) * &squares);
        let lhs =
            premises.iter().zip(multipliers).map(|(p, m)| format!("{m}·{}", p.desc)).collect::<Vec<_>>().join(" + ");
        verify_identity(&lhs, &combo, &rhs).map_err(|e| reject(rule, e))?;
        let ident = vec![format!("{lhs} = {}[{}]", neg_times(w), square_list(&gs))];
        let subs = self.bind_all(&gs)?;
        let note = format!(
            "{} ≥ 0 on {}; {w} > 0",
            multipliers.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            self.case
        );
        self.log_rule(rule, ident, subs, note);
        Ok(())
    }

    fn side_condition(&self, weights: &[Weight]) -> String {
        format!(
            "weights {} on {}, not simultaneously zero",
            weights.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            self.case
        )
    }

    fn log_rule(&mut self, rule: Rule, ident: Vec<String>, subs: Vec<String>, note: String) {
        let step = self.push(StepKind::Rule);
        step.rule = Some(rule);
        step.identity = Some(ident.join("; "));
        step.substitution = subs;
        step.note = note;
    }

    fn bind_all(&mut self, gs: &[(MPoly, Var)]) -> Res<Vec<String>> {
        let mut out = Vec::new();
        for (g, target) in gs {
            let g = g.substitute(&self.bindings);
            let (c, rest) = g
                .linear_in(*target)
                .ok_or_else(|| ReplayError::NotBindable { var: target.name().to_string(), poly: g.to_string() })?;
            let value = rest.scale(&(-c.recip()));
            out.push(self.bind(*target, value)?);
        }
        Ok(out)
    }

    /// Adds `v ↦ value`, composing with the existing substitutions.
    fn bind(&mut self, v: Var, value: MPoly) -> Res<String> {
        if self.bindings.contains_key(&v) {
            return Err(ReplayError::DoubleBinding { var: v.name().to_string() });
        }
        let value = value.substitute(&self.bindings);
        if value.contains(v) {
            return Err(ReplayError::NotBindable { var: v.name().to_string(), poly: value.to_string() });
        }
        let single: Bindings = [(v, value.clone())].into_iter().collect();
        for e in self.bindings.values_mut() {
            *e = e.substitute(&single);
        }
        self.bindings.insert(v, value.clone());
        self.check_conservation()?;
        Ok(format!("{v} ↦ {value}"))
    }

    /// Names the complex unknown `from` by `to` (`α₃ = α`).
    pub fn rename(&mut self, from: &str, to: &str) -> Res<()> {
        let reg = VarRegistry::standard();
        let c = |n: &str| reg.complex(n).map_err(|e| ReplayError::Template(e.to_string()));
        let ((fr, fi), (tr, ti)) = (c(from)?, c(to)?);
        let subs = vec![self.bind(fr, MPoly::var(tr))?, self.bind(fi, MPoly::var(ti))?];
        let step = self.push(StepKind::Definition);
        step.substitution = subs;
        step.note = format!("{} is kept as the free unknown {}", greek(from), greek(to));
        Ok(())
    }

    /// Checks that the substitutions give `var = expr` for each pair.
    pub fn check_values(&mut self, pairs: &[(&str, &str)]) -> Res<()> {
        for (v, e) in pairs {
            let want = parse_poly(e)?.substitute(&self.bindings);
            verify_identity(v, &self.value_of(var(v)), &want)?;
        }
        self.push(StepKind::Check).identity =
            Some(pairs.iter().map(|(v, e)| format!("{v} = {e}")).collect::<Vec<_>>().join(", "));
        Ok(())
    }

    /// Records the current values of `vars`.
    pub fn milestone(&mut self, name: &str, vars: &[&str]) {
        let reg = VarRegistry::standard();
        let values = vars
            .iter()
            .map(|&n| {
                let shown = match reg.complex(n) {
                    Ok((re, im)) => PolyComplex::new(self.value_of(re), self.value_of(im)).to_string(),
                    Err(_) => self.value_of(var(n)).to_string(),
                };
                (n.to_string(), shown)
            })
            .collect();
        self.milestones.push(Milestone { name: name.to_string(), values });
    }

    /// A copy restricted to one λ case; the point cases substitute λ.
    pub fn branch(&self, case: LambdaCase) -> Res<Self> {
        let mut s = self.clone();
        s.case = case;
        s.stage = Stage::E;
        let subs = match case {
            LambdaCase::Zero => vec![s.bind(var("lam"), MPoly::zero())?],
            LambdaCase::One => vec![s.bind(var("lam"), MPoly::one())?],
            _ => Vec::new(),
        };
        let step = s.push(StepKind::Case);
        step.substitution = subs;
        step.note = format!("case {case}");
        Ok(s)
    }

    /// Checks `φ₁(B) = λΦ(B)` and `φ₂(B) = (1-λ)Φ(B)` on all nine basis images.
    pub fn conclude(&mut self) -> Res<()> {
        let lam = PolyComplex::real(self.value_of(var("lam")));
        let rest = PolyComplex::int(1) - lam.clone();
        for (side, w) in [(Side::One, &lam), (Side::Two, &rest)] {
            let m = self.map(side);
            for (k, e) in HermitianBasis::new(3).elements().iter().enumerate() {
                verify_matrix(&format!("{side}({e}) = {w}·Φ({e})"), &m.images()[k], &self.choi[k].scale(w))?;
            }
        }
        let step = self.push(StepKind::Conclusion);
        step.identity = Some(format!("φ1(B) = ({lam})·Φ(B), φ2(B) = ({rest})·Φ(B) for all nine B"));
        step.note = "φ1 = λΦ and φ2 = (1 - λ)Φ".into();
        Ok(())
    }
}

fn greek(name: &str) -> String {
    name.replace("alpha", "α").replace("beta", "β").replace("gamma", "γ")
}

fn reject(rule: Rule, e: ReplayError) -> ReplayError {
    ReplayError::RuleRejected { rule: Some(rule), reason: e.to_string() }
}

/// `-w·` with a unit weight shown as a bare minus sign.
fn neg_times(w: &Weight) -> String {
    if *w == Weight::one() {
        "-".into()
    } else {
        format!("-{w}·")
    }
}

fn square_list(gs: &[(MPoly, Var)]) -> String {
    gs.iter().map(|(g, _)| format!("({g})^2")).collect::<Vec<_>>().join(" + ")
}
