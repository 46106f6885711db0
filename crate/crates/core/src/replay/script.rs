//! The hard-coded sequence of probes and rules.

use super::engine::{DerivationState, Side, Weight};
use super::templates;
use super::{CaseOutcome, CertificateReport, LambdaCase, ReplayError, Stage};
use crate::maps::BasisElement;
use crate::positivity::Minor::{self, Det, Principal};

use Side::{One, Two};

type Res<T> = std::result::Result<T, ReplayError>;

const D1: Minor = Principal(1);
const D2: Minor = Principal(2);
const D3: Minor = Principal(3);

fn either(side: Side, one: &'static str, two: &'static str) -> Option<&'static str> {
    Some(if side == One { one } else { two })
}

/// `λ` for `φ₁`, `1 - λ` for `φ₂`, scaled by `c`.
fn own(side: Side, c: i64) -> Weight {
    match side {
        One => Weight::new(c, 1, 0),
        Two => Weight::new(c, 0, 1),
    }
}

/// `λ` for `φ₁`, `λ - 1` for `φ₂`, scaled by `c`.
fn shifted(side: Side, c: i64) -> Weight {
    match side {
        One => Weight::new(c, 1, 0),
        Two => Weight::new(-c, 0, 1),
    }
}

fn lemma1(s: &mut DerivationState) -> Res<()> {
    s.axiom("PSD A + B = C with C_kk = 0 forces A_kk = B_kk = 0 and zero k-th rows and columns in A and B");
    s.axiom("Re φ1 = λΦ and Re φ2 = (1 - λ)Φ on real symmetric matrices for some 0 ≤ λ ≤ 1 (Φ is extremal on S_3)");
    s.restriction_form()?;
    s.conservation()
}

fn lemma2(s: &mut DerivationState) -> Res<()> {
    s.set_stage(Stage::B);
    let f = s.probe(One, "X[1,t,0]", D3, Some("-b1^2*t^2 - 2*a1*b1*t + lam^2 - a1^2"))?;
    let l = s.leading_coeff(f, "t", Some("-b1^2"))?;
    s.vanishing_sos(&[l], &[Weight::one()], &[("b1", "b1")])?;

    let f = s.probe(One, "X[1,0,t]", D2, None)?;
    s.shape(f, "t", 4, 2)?;
    let l = s.divisible_t2(f, "t", Some("-b5^2"))?;
    s.vanishing_sos(&[l], &[Weight::one()], &[("b5", "b5")])?;

    let f = s.probe(One, "X[0,1,t]", D1, None)?;
    let l = s.leading_coeff(f, "t", Some("-b9^2"))?;
    s.vanishing_sos(&[l], &[Weight::one()], &[("b9", "b9")])?;

    let mut lead = Vec::new();
    for side in [One, Two] {
        let f = s.probe(side, "X[1,t,0]", Det, None)?;
        s.shape(f, "t", 4, 2)?;
        lead.push(s.leading_coeff(f, "t", either(side, "-lam*(a2+b2)^2", "-(1-lam)*(a2+b2)^2"))?);
    }
    s.vanishing_sos(&lead, &[own(One, 1), own(Two, 1)], &[("a2 + b2", "b2")])?;

    let mut lead = Vec::new();
    for side in [One, Two] {
        let f = s.probe(side, "X[0,1,t]", Det, None)?;
        s.shape(f, "t", 4, 2)?;
        lead.push(s.leading_coeff(f, "t", None)?);
    }
    s.vanishing_sos(&lead, &[own(One, 1), own(Two, 1)], &[("a3 + b7", "b7")])?;

    let mut low = Vec::new();
    for side in [One, Two] {
        let f = s.probe(side, "X[1,0,t]", Det, None)?;
        s.shape(f, "t", 4, 2)?;
        low.push(s.divisible_t2(f, "t", either(side, "-lam*(a1-b6)^2", "-(1-lam)*(a1-b6)^2"))?);
    }
    s.vanishing_sos(&low, &[own(One, 1), own(Two, 1)], &[("a1 - b6", "b6")])?;

    let sums = [
        s.probe(One, "X[1,±1,±1]", Det, Some("-8*lam*((a1+b8)^2 + (a2-b4)^2 + (a3+b3)^2)"))?,
        s.probe(Two, "X[1,±1,±1]", Det, Some("-8*(1-lam)*((a1+b8)^2 + (a2-b4)^2 + (a3+b3)^2)"))?,
    ];
    s.vanishing_sos(&sums, &[own(One, 8), own(Two, 8)], &[("a1 + b8", "b8"), ("a2 - b4", "b4"), ("a3 + b3", "b3")])?;

    s.check_values(&templates::CORRELATIONS)?;
    s.milestone("lemma2", &["b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "b9"]);
    s.conservation()
}

fn h12(s: &mut DerivationState) -> Res<()> {
    let fam = "X[1,-ti,0]";
    let mut z = Vec::new();
    for side in [One, Two] {
        let f = s.probe(side, fam, D3, None)?;
        s.shape(f, "t", 3, 0)?;
        z.push(s.leading_coeff(f, "t", either(side, "lam*c1", "(lam-1)*c1"))?);
    }
    s.weighted_vanishing(&z, &[shifted(One, 1), shifted(Two, 1)], ("c1", "c1"))?;

    let f1 = s.probe(One, fam, D3, Some("lam^2 - a1^2 + (lam*c2 - 2*a1*im(alpha1))*t + (lam^2 - abs2(alpha1))*t^2"))?;
    let f2 = s.probe(
        Two,
        fam,
        D3,
        Some("(lam-1)^2 - a1^2 + ((lam-1)*c2 - 2*a1*(1+im(alpha1)))*t + ((lam-1)^2 - re(alpha1)^2 - (1+im(alpha1))^2)*t^2"),
    )?;
    let cond1 = s.leading_coeff(f1, "t", Some("lam^2 - abs2(alpha1)"))?;
    let cond2 = s.leading_coeff(f2, "t", Some("(lam-1)^2 - re(alpha1)^2 - (1+im(alpha1))^2"))?;
    s.squeeze(
        &[cond1, cond2],
        &[own(Two, 1), own(One, 1)],
        &Weight::one(),
        &[("re_alpha1", "re_alpha1"), ("im_alpha1 + lam", "im_alpha1")],
    )?;

    let z1 = s.leading_coeff(f1, "t", Some("lam*(c2 + 2*a1)"))?;
    let z2 = s.leading_coeff(f2, "t", Some("(lam-1)*(c2 + 2*a1)"))?;
    s.weighted_vanishing(&[z1, z2], &[shifted(One, 1), shifted(Two, 1)], ("c2 + 2*a1", "c2"))?;

    let mut z = Vec::new();
    for side in [One, Two] {
        let f = s.probe(side, fam, D2, None)?;
        s.shape(f, "t", 2, 1)?;
        z.push(s.forced_zero_linear(f, "t", either(side, "lam*c3", "(lam-1)*c3"))?);
    }
    s.weighted_vanishing(&z, &[shifted(One, 1), shifted(Two, 1)], ("c3", "c3"))?;

    let mut lead = Vec::new();
    for side in [One, Two] {
        let f = s.probe(side, fam, Det, None)?;
        s.shape(f, "t", 4, 0)?;
        lead.push(s.leading_coeff(f, "t", either(side, "-lam*abs2(alpha2 - a2)", "-(1-lam)*abs2(alpha2 - a2)"))?);
    }
    s.vanishing_sos(
        &lead,
        &[own(One, 1), own(Two, 1)],
        &[("re_alpha2 - a2", "re_alpha2"), ("im_alpha2", "im_alpha2")],
    )?;
    s.rename("alpha3", "alpha")?;
    s.milestone("h12", &["c1", "c2", "c3", "alpha1", "alpha2"]);
    Ok(())
}

fn h23(s: &mut DerivationState) -> Res<()> {
    let fam = "X[0,1,-ti]";
    let mut f = Vec::new();
    let mut z = Vec::new();
    for side in [One, Two] {
        let p = s.probe(side, fam, D1, None)?;
        s.shape(p, "t", 3, 0)?;
        z.push(s.leading_coeff(p, "t", either(side, "lam*c8", "(lam-1)*c8"))?);
        f.push(p);
    }
    s.weighted_vanishing(&z, &[shifted(One, 1), shifted(Two, 1)], ("c8", "c8"))?;
    let cond1 = s.leading_coeff(f[0], "t", Some("lam^2 - abs2(alpha9)"))?;
    let cond2 = s.leading_coeff(f[1], "t", Some("(lam-1)^2 - re(alpha9)^2 - (1+im(alpha9))^2"))?;
    s.squeeze(
        &[cond1, cond2],
        &[own(Two, 1), own(One, 1)],
        &Weight::one(),
        &[("re_alpha9", "re_alpha9"), ("im_alpha9 + lam", "im_alpha9")],
    )?;
    let z1 = s.leading_coeff(f[0], "t", None)?;
    let z2 = s.leading_coeff(f[1], "t", None)?;
    s.weighted_vanishing(&[z1, z2], &[shifted(One, 1), shifted(Two, 1)], ("c9 + 2*a2", "c9"))?;

    let mut z = Vec::new();
    for side in [One, Two] {
        let p = s.probe(side, fam, D3, None)?;
        z.push(s.forced_zero_linear(p, "t", either(side, "lam*c7", "(lam-1)*c7"))?);
    }
    s.weighted_vanishing(&z, &[shifted(One, 1), shifted(Two, 1)], ("c7", "c7"))?;

    let mut lead = Vec::new();
    for side in [One, Two] {
        let p = s.probe(side, fam, Det, None)?;
        lead.push(s.leading_coeff(p, "t", None)?);
    }
    s.vanishing_sos(
        &lead,
        &[own(One, 1), own(Two, 1)],
        &[("re_alpha7 + a3", "re_alpha7"), ("im_alpha7", "im_alpha7")],
    )?;
    s.rename("alpha8", "gamma")
}

fn h13(s: &mut DerivationState) -> Res<()> {
    let fam = "X[1,0,-ti]";
    let mut z = Vec::new();
    for side in [One, Two] {
        let p = s.probe(side, fam, D3, None)?;
        s.shape(p, "t", 3, 0)?;
        z.push(s.leading_coeff(p, "t", either(side, "lam*c5", "(lam-1)*c5"))?);
    }
    s.weighted_vanishing(&z, &[shifted(One, 1), shifted(Two, 1)], ("c5", "c5"))?;

    let mut f = Vec::new();
    let mut z = Vec::new();
    for side in [One, Two] {
        let p = s.probe(side, fam, D2, None)?;
        s.shape(p, "t", 4, 1)?;
        z.push(s.forced_zero_linear(p, "t", either(side, "lam*c6", "(lam-1)*c6"))?);
        f.push(p);
    }
    s.weighted_vanishing(&z, &[shifted(One, 1), shifted(Two, 1)], ("c6", "c6"))?;
    let cond1 = s.divisible_t2(f[0], "t", Some("lam^2 - abs2(alpha5)"))?;
    let cond2 = s.divisible_t2(f[1], "t", Some("(lam-1)^2 - re(alpha5)^2 - (1+im(alpha5))^2"))?;
    s.squeeze(
        &[cond1, cond2],
        &[own(Two, 1), own(One, 1)],
        &Weight::one(),
        &[("re_alpha5", "re_alpha5"), ("im_alpha5 + lam", "im_alpha5")],
    )?;
    let z1 = s.forced_zero_linear(f[0], "t", Some("lam*(c4 + 2*a3)"))?;
    let z2 = s.forced_zero_linear(f[1], "t", Some("(lam-1)*(c4 + 2*a3)"))?;
    s.weighted_vanishing(&[z1, z2], &[shifted(One, 1), shifted(Two, 1)], ("c4 + 2*a3", "c4"))?;

    let mut low = Vec::new();
    for side in [One, Two] {
        let p = s.probe(side, fam, Det, None)?;
        s.shape(p, "t", 4, 2)?;
        low.push(s.divisible_t2(p, "t", None)?);
    }
    s.vanishing_sos(&low, &[own(One, 1), own(Two, 1)], &[("re_alpha6 + a1", "re_alpha6"), ("im_alpha6", "im_alpha6")])?;
    s.rename("alpha4", "beta")
}

fn lemma3(s: &mut DerivationState) -> Res<()> {
    s.set_stage(Stage::C);
    h12(s)?;
    h23(s)?;
    h13(s)?;
    let herm = [BasisElement::Herm(0, 1), BasisElement::Herm(0, 2), BasisElement::Herm(1, 2)];
    for (k, e) in herm.into_iter().enumerate() {
        s.check_image(One, e, templates::PHI1_H_FINAL[k])?;
        s.check_image(Two, e, templates::PHI2_H_FINAL[k])?;
    }
    s.milestone(
        "lemma3",
        &[
            "c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9", "alpha1", "alpha2", "alpha5", "alpha6", "alpha7",
            "alpha9",
        ],
    );
    s.conservation()
}

/// `p(t, s)` quadratic in `t`; its `t²` coefficient is a polynomial in `s`
/// that must be `>= 0` for every `s`. When it vanishes at `s = 0` the
/// linear term is forced to 0, otherwise it is linear and its slope is.
fn eliminate_a(
    s: &mut DerivationState,
    fam: &str,
    minor: Minor,
    target: &str,
    c: i64,
    expected: Option<[&'static str; 2]>,
) -> Res<()> {
    let mut z = Vec::new();
    for side in [One, Two] {
        let p = s.probe(side, fam, minor, None)?;
        s.shape(p, "t", 2, 0)?;
        let q = s.leading_coeff(p, "t", expected.map(|e| e[side as usize]))?;
        let constant = s.fact(q).poly.coeff_of(crate::poly::Var::named("s").expect("registered"), 0);
        let q_zero_at_origin = constant.substitute(s.bindings()).is_zero();
        z.push(if q_zero_at_origin { s.forced_zero_linear(q, "s", None)? } else { s.leading_coeff(q, "s", None)? });
    }
    s.weighted_vanishing(&z, &[shifted(One, c), shifted(Two, c)], (target, target))
}

fn family(s: &mut DerivationState) -> Res<()> {
    s.set_stage(Stage::D);
    s.check_entry_list(One, &templates::PHI1_ENTRIES)?;
    s.check_entry_list(Two, &templates::PHI2_ENTRIES)?;
    let paper = ["4*lam*a3*s + (lam^2-a3^2)*s^2", "4*(lam-1)*a3*s + ((lam-1)^2-a3^2)*s^2"];
    eliminate_a(s, "X[1,t,si]", D3, "a3", 4, Some(paper))?;
    eliminate_a(s, "X[t,1,si]", D2, "a2", 4, None)?;
    eliminate_a(s, "X[si,1,t]", D1, "a1", -4, None)?;
    s.milestone("eq_a", &["a1", "a2", "a3"]);
    s.conservation()
}

/// `λ ∈ {0, 1}`: the side that vanishes on the diagonal has zero-diagonal
/// probe images, whose 2x2 minors are `-|z|²`.
fn endpoint(s: &DerivationState, case: LambdaCase) -> Res<DerivationState> {
    let mut b = s.branch(case)?;
    let side = if case == LambdaCase::Zero { One } else { Two };
    if case == LambdaCase::Zero {
        b.check_probe_matrix(One, "X[1,1,i]", "0, -beta, -gamma; -conj(beta), 0, 0; -conj(gamma), 0, 0")?;
        b.check_probe_matrix(One, "X[1,i,1]", "0, 0, gamma; 0, 0, -alpha; conj(gamma), -conj(alpha), 0")?;
    }
    let f = b.probe(side, "X[1,1,i]", D3, Some("-abs2(beta)"))?;
    b.vanishing_sos(&[f], &[Weight::one()], &[("re_beta", "re_beta"), ("im_beta", "im_beta")])?;
    let f = b.probe(side, "X[1,1,i]", D2, Some("-abs2(gamma)"))?;
    b.vanishing_sos(&[f], &[Weight::one()], &[("re_gamma", "re_gamma"), ("im_gamma", "im_gamma")])?;
    let f = b.probe(side, "X[1,i,1]", D1, Some("-abs2(alpha)"))?;
    b.vanishing_sos(&[f], &[Weight::one()], &[("re_alpha", "re_alpha"), ("im_alpha", "im_alpha")])?;
    b.conclude()?;
    Ok(b)
}

fn interior(s: &DerivationState) -> Res<DerivationState> {
    let mut b = s.branch(LambdaCase::Open)?;
    let fam = "X[1,e^{±iπ/2},e^{±iπ/2}]";
    let f1 = b.probe(One, fam, Det, Some("-4*lam*(abs2(alpha) + abs2(beta)) + 12*lam^2*im(beta)"))?;
    let f2 = b.probe(Two, fam, Det, Some("-4*(1-lam)*(abs2(alpha) + abs2(beta)) - 12*(1-lam)^2*im(beta)"))?;
    b.squeeze(
        &[f1, f2],
        &[Weight::new(1, 0, 2), Weight::new(1, 2, 0)],
        &Weight::new(4, 1, 1),
        &[("re_alpha", "re_alpha"), ("im_alpha", "im_alpha"), ("re_beta", "re_beta"), ("im_beta", "im_beta")],
    )?;
    let g1 = b.probe(One, "X[1,1,i]", Det, Some("-2*lam*abs2(gamma) + 6*lam^2*im(gamma)"))?;
    let g2 = b.probe(Two, "X[1,1,i]", Det, Some("-2*(1-lam)*abs2(gamma) - 6*(1-lam)^2*im(gamma)"))?;
    b.squeeze(
        &[g1, g2],
        &[Weight::new(1, 0, 2), Weight::new(1, 2, 0)],
        &Weight::new(2, 1, 1),
        &[("re_gamma", "re_gamma"), ("im_gamma", "im_gamma")],
    )?;
    b.conclude()?;
    Ok(b)
}

pub(crate) fn run() -> Res<CertificateReport> {
    let mut s = DerivationState::new()?;
    lemma1(&mut s)?;
    lemma2(&mut s)?;
    lemma3(&mut s)?;
    family(&mut s)?;

    let prefix = s.steps().len();
    let mut steps = s.steps().to_vec();
    let mut milestones = s.milestones().to_vec();
    let mut cases = Vec::new();
    for case in [LambdaCase::Zero, LambdaCase::One, LambdaCase::Open] {
        let b = if case == LambdaCase::Open { interior(&s)? } else { endpoint(&s, case)? };
        for step in &b.steps()[prefix..] {
            let mut step = step.clone();
            step.index = steps.len() + 1;
            steps.push(step);
        }
        milestones.extend(b.milestones()[s.milestones().len()..].iter().cloned());
        cases.push(CaseOutcome { case, concluded: true });
    }
    Ok(CertificateReport { steps, milestones, cases, conclusion: true })
}
