use super::*;

fn report() -> CertificateReport {
    replay_choi_extremality().expect("replay succeeds")
}

fn shown(src: &str) -> String {
    PolyComplex::parse(src).unwrap().to_string()
}

fn assert_milestone(r: &CertificateReport, name: &str, pairs: &[(&str, &str)]) {
    for (var, expected) in pairs {
        let got = r.milestone(name, var).unwrap_or_else(|| panic!("{name}: no value for {var}"));
        assert_eq!(got, shown(expected), "{name}: {var}");
    }
}

#[test]
fn replay_concludes_in_every_case() {
    let r = report();
    assert!(r.conclusion);
    assert_eq!(r.cases.len(), 3);
    assert!(r.cases.iter().all(|c| c.concluded));
    let cases: Vec<_> = r.cases.iter().map(|c| c.case).collect();
    assert_eq!(cases, [LambdaCase::Zero, LambdaCase::One, LambdaCase::Open]);
}

#[test]
fn correlation_milestone() {
    assert_milestone(&report(), "lemma2", &templates::CORRELATIONS);
}

#[test]
fn h12_milestone() {
    assert_milestone(
        &report(),
        "h12",
        &[("c1", "0"), ("c2", "-2*a1"), ("c3", "0"), ("alpha1", "-lam*i"), ("alpha2", "a2")],
    );
}

#[test]
fn diagonal_parameters_vanish() {
    assert_milestone(&report(), "eq_a", &[("a1", "0"), ("a2", "0"), ("a3", "0")]);
}

#[test]
fn only_positivity_is_assumed() {
    let r = report();
    let axioms: Vec<_> = r.axiom_steps().collect();
    assert_eq!(axioms.len(), 2);
    assert!(axioms.iter().all(|s| s.stage == Stage::A && s.kind == StepKind::Axiom));
    assert!(r.steps.iter().filter(|s| s.kind == StepKind::Rule).all(|s| s.rule.is_some() && s.identity.is_some()));
}

#[test]
fn steps_are_numbered_in_order() {
    let r = report();
    assert!(r.steps.iter().enumerate().all(|(k, s)| s.index == k + 1));
    assert!(r.steps.windows(2).all(|w| w[0].stage <= w[1].stage || w[1].kind == StepKind::Case));
}

#[test]
fn text_and_json_output() {
    let r = report();
    let text = r.to_text();
    assert!(text.lines().count() >= r.steps.len());
    assert!(text.contains("VanishingSOS") || text.contains("VanishingSos"));
    let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    assert_eq!(v["conclusion"], serde_json::Value::Bool(true));
    assert_eq!(v["steps"].as_array().unwrap().len(), r.steps.len());
}

#[test]
fn stage_a_images() {
    let a = build_stage_maps(Stage::A).unwrap();
    assert_eq!(a.elements.len(), 3);
    assert!(a.maps().is_none());
    let e11 = &a.phi1[0];
    assert_eq!(e11[(0, 0)], PolyComplex::parse("lam").unwrap());
    assert_eq!(e11[(0, 1)], PolyComplex::parse("a1*i").unwrap());
    assert_eq!(e11[(2, 2)], PolyComplex::default());
    assert_eq!(a.phi2[0][(1, 0)], PolyComplex::parse("a1*i").unwrap());
}

#[test]
fn stage_b_and_c_images() {
    let b = build_stage_maps(Stage::B).unwrap();
    assert_eq!(b.elements.len(), 6);
    assert_eq!(b.phi1[3][(0, 1)], PolyComplex::parse("-lam+b1*i").unwrap());
    let c = build_stage_maps(Stage::C).unwrap();
    assert_eq!(c.phi1[3][(0, 1)], PolyComplex::parse("-lam").unwrap());
    assert_eq!(c.phi1[3][(0, 2)], PolyComplex::parse("-a2*i").unwrap());
    assert_eq!(c.phi1[6][(1, 1)], PolyComplex::parse("-2*a1").unwrap());
}

#[test]
fn every_stage_conserves_the_choi_map() {
    for stage in [Stage::A, Stage::B, Stage::C, Stage::D, Stage::E] {
        assert!(build_stage_maps(stage).unwrap().conservation_holds(), "{stage}");
    }
}

#[test]
fn stage_e_is_a_scaling() {
    let (p1, p2) = build_stage_maps(Stage::E).unwrap().maps().unwrap();
    let lam = PolyComplex::parse("lam").unwrap();
    let choi = BuiltinMap::Choi.build_generic::<PolyComplex>();
    for (a, b) in p1.images().iter().zip(choi.images()) {
        assert_eq!(*a, b.scale(&lam));
    }
    assert_eq!(p2.images()[0][(0, 0)], PolyComplex::parse("1-lam").unwrap());
}

#[test]
fn stage_d_entry_formula() {
    let (p1, _) = build_stage_maps(Stage::D).unwrap().maps().unwrap();
    let x = Matrix::from_fn(3, |r, c| PolyComplex::parse(&format!("x{}{}", r + 1, c + 1)).unwrap());
    let y = p1.apply(&x).unwrap();
    assert_eq!(y[(0, 0)], PolyComplex::parse(templates::PHI1_ENTRIES[0]).unwrap());
    assert_eq!(y[(1, 1)], PolyComplex::parse(templates::PHI1_ENTRIES[4]).unwrap());
}

#[test]
fn probe_matrix_is_rank_one_image() {
    let (p1, _) = build_stage_maps(Stage::D).unwrap().maps().unwrap();
    let m = symbolic_probe(&p1, &ProbeFamily::parse("X[1,0,0]").unwrap()).unwrap();
    assert_eq!(m.len(), 1);
    assert_eq!(m[0], *p1.image(BasisElement::Diag(0)));
    let two = symbolic_probe(&p1, &ProbeFamily::parse("X[1,±1,0]").unwrap()).unwrap();
    assert_eq!(two.len(), 2);
}

#[test]
fn identity_residual_is_reported() {
    let p = MPoly::parse("lam^2 + a1").unwrap();
    let q = MPoly::parse("lam^2").unwrap();
    assert!(verify_identity("same", &p, &p).is_ok());
    match verify_identity("ctx", &p, &q) {
        Err(ReplayError::IdentityMismatch { context, residual, .. }) => {
            assert_eq!(context, "ctx");
            assert_eq!(residual, MPoly::parse("a1").unwrap().to_string());
        }
        other => panic!("{other:?}"),
    }
}

/// A fresh state with the correlations of the first lemma probed.
fn probed() -> (DerivationState, FactId) {
    let mut s = DerivationState::new().unwrap();
    s.axiom("φ1 positive");
    let f = s.probe(Side::One, "X[1,t,0]", Minor::Principal(2), None).unwrap();
    (s, f)
}

#[test]
fn wrong_certificate_is_rejected() {
    let (mut s, f) = probed();
    let lead = s.leading_coeff(f, "t", None).unwrap();
    let err = s.vanishing_sos(&[lead], &[Weight::one()], &[("b2", "b2")]).unwrap_err();
    assert!(matches!(err, ReplayError::RuleRejected { rule: Some(Rule::VanishingSos), .. }), "{err}");
}

#[test]
fn nonpositive_weight_is_rejected() {
    let (mut s, f) = probed();
    let lead = s.leading_coeff(f, "t", None).unwrap();
    let err = s.squeeze(&[lead], &[Weight::one()], &Weight::lam(), &[("b1", "b1")]).unwrap_err();
    assert!(matches!(err, ReplayError::RuleRejected { .. }), "{err}");
}

#[test]
fn variables_bind_once() {
    let mut s = DerivationState::new().unwrap();
    s.rename("alpha3", "alpha").unwrap();
    let err = s.rename("alpha3", "beta").unwrap_err();
    assert!(matches!(err, ReplayError::DoubleBinding { .. }), "{err}");
}

#[test]
fn branch_fixes_the_endpoint() {
    let (s, _) = probed();
    let z = s.branch(LambdaCase::Zero).unwrap();
    assert_eq!(z.case(), LambdaCase::Zero);
    assert_eq!(z.bindings().get(&Var::named("lam").unwrap()), Some(&MPoly::zero()));
    let o = s.branch(LambdaCase::Open).unwrap();
    assert!(o.bindings().get(&Var::named("lam").unwrap()).is_none());
}

#[test]
fn lambda_case_endpoints() {
    assert!(LambdaCase::Closed.contains_zero() && LambdaCase::Closed.contains_one());
    assert!(LambdaCase::Zero.contains_zero() && !LambdaCase::Zero.contains_one());
    assert!(!LambdaCase::Open.contains_zero() && !LambdaCase::Open.contains_one());
}

#[test]
fn weight_display() {
    assert_eq!(Weight::one().to_string(), "1");
    assert_eq!(Weight::lam().to_string(), "λ");
    assert_eq!(Weight::new(-1, 0, 1).to_string(), "-(1 - λ)");
    assert_eq!(Weight::new(2, 1, 1).to_string(), "2·λ·(1 - λ)");
}

#[test]
fn exact_and_numeric_agree() {
    let cv = cross_validate(40, 7).unwrap();
    assert_eq!(cv.points, 40);
    assert!(cv.max_apply_deviation <= 1e-9, "{}", cv.max_apply_deviation);
    assert!(cv.max_minor_deviation <= 1e-9, "{}", cv.max_minor_deviation);
}
