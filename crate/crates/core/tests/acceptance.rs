//! End-to-end acceptance checks, one PASS/FAIL line each. Run with
//! `cargo test --test acceptance`.

use std::time::{Duration, Instant};

use choimap::forms::{choi_form, form_from_map, map_from_form};
use choimap::maps::random::{random_hermitian_preserving, random_real_preserving};
use choimap::maps::SymmetricRestriction;
use choimap::matrix::rank_one_projector;
use choimap::poly::PolyComplex;
use choimap::positivity::{
    is_proportional, minimize_lambda_min, perturbation_extremality_probe, psi3_positivity_certificate,
    random_unit_vector, sample_positivity, sample_positivity_with_probes, stream_rng, PerturbationConfig,
};
use choimap::replay::{build_stage_maps, cross_validate, replay_choi_extremality, Stage};
use choimap::report::transpose_difference;
use choimap::{BuiltinMap, ComplexMap, ComplexMatrix, Matrix};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn det3(m: &ComplexMatrix) -> Complex64 {
    let a = |r, k| m[(r, k)];
    a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
}

fn outer(x: &[Complex64]) -> ComplexMatrix {
    Matrix::from_fn(3, |r, k| x[r] * x[k].conj())
}

fn milestone(r: &choimap::replay::CertificateReport, name: &str, pairs: &[(&str, &str)]) -> Result<(), String> {
    for (var, want) in pairs {
        let got = r.milestone(name, var).ok_or(format!("{name}: {var} missing"))?;
        let want = PolyComplex::parse(want).map_err(|e| e.to_string())?.to_string();
        ensure(got == want, format!("{name}: {var} = {got}, expected {want}"))?;
    }
    Ok(())
}

fn symbolic_replay() -> Check {
    let start = Instant::now();
    let r = replay_choi_extremality().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.conclusion && r.cases.iter().all(|k| k.concluded), "not every case concluded")?;
    milestone(
        &r,
        "lemma2",
        &[
            ("b1", "0"),
            ("b5", "0"),
            ("b9", "0"),
            ("b2", "-a2"),
            ("b4", "a2"),
            ("b6", "a1"),
            ("b3", "-a3"),
            ("b7", "-a3"),
            ("b8", "-a1"),
        ],
    )?;
    milestone(&r, "h12", &[("c1", "0"), ("c3", "0"), ("c2", "-2*a1"), ("alpha1", "-lam*i"), ("alpha2", "a2")])?;
    milestone(&r, "eq_a", &[("a1", "0"), ("a2", "0"), ("a3", "0")])?;
    let e = build_stage_maps(Stage::E).map_err(|e| e.to_string())?;
    ensure(e.conservation_holds(), "stage E does not sum to Φ")?;
    ensure(elapsed <= Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("{} exact steps, {} cases, {:.2?}", r.steps.len(), r.cases.len(), elapsed))
}

/// The explicit matrix formula of Ψ₂.
fn psi2_formula(x: &ComplexMatrix) -> ComplexMatrix {
    let e = |r: usize, k: usize| x[(r - 1, k - 1)];
    let h = c(0.5, 0.0);
    let rows = vec![
        vec![e(1, 1) + e(3, 3), -e(1, 2) - h * (e(2, 3) - e(3, 2)), -e(1, 3)],
        vec![-e(2, 1) + h * (e(2, 3) - e(3, 2)), e(1, 1) + e(2, 2), -h * (e(2, 3) + e(3, 2))],
        vec![-e(3, 1), -h * (e(2, 3) + e(3, 2)), e(2, 2) + e(3, 3)],
    ];
    Matrix::from_rows(rows).unwrap()
}

fn psi2_counterexample() -> Check {
    let x = [c(1.0, 0.0), c(2.0, -1.0), c(-1.0, -1.0)];
    let psi2 = ComplexMap::builtin(BuiltinMap::Psi2);
    let img = psi2.apply(&rank_one_projector(&x).unwrap()).unwrap();
    let oracle = psi2_formula(&outer(&x));
    ensure(img.max_abs_diff(&oracle) <= 1e-12, "Ψ2 disagrees with its matrix formula")?;
    let det = img.determinant();
    ensure((det - c(-25.0, 0.0)).norm() <= 1e-9, format!("det = {det}"))?;
    ensure((det3(&oracle) - c(-25.0, 0.0)).norm() <= 1e-9, "cofactor oracle disagrees")?;
    let v = img.is_psd(1e-10).unwrap();
    ensure(!v.is_psd, "image reported PSD")?;
    let w = v.witness.ok_or("no witness")?;
    let quad: Complex64 =
        (0..3).flat_map(|r| (0..3).map(move |k| (r, k))).map(|(r, k)| w[r].conj() * img[(r, k)] * w[k]).sum();
    let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum();
    ensure(
        quad.re < 0.0 && (quad.re - v.lambda_min).abs() <= 1e-9 && (norm - 1.0).abs() <= 1e-9,
        "witness is not a negative eigenvector",
    )?;
    Ok(format!("det = {:.10}, λ_min = {:.6}", det.re, v.lambda_min))
}

fn positivity_suite() -> Check {
    let mut notes = Vec::new();
    for which in [BuiltinMap::Choi, BuiltinMap::Psi1, BuiltinMap::Psi3, BuiltinMap::Identity, BuiltinMap::Transpose] {
        let v = sample_positivity(&ComplexMap::builtin(which), 100_000, 42, 1e-10);
        ensure(!v.is_violation(), format!("{} violated: {:?}", which.name(), v.witness))?;
        ensure(v.samples_used == 100_000, format!("{} used {} samples", which.name(), v.samples_used))?;
    }
    let psi2 = ComplexMap::builtin(BuiltinMap::Psi2);
    let m = minimize_lambda_min(&psi2, 100, 300, 42);
    ensure(m.lambda_min < -0.1, format!("local search reached only {}", m.lambda_min))?;
    notes.push(format!("Ψ2 local search λ_min = {:.4}", m.lambda_min));
    let witness = vec![c(1.0, 0.0), c(2.0, -1.0), c(-1.0, -1.0)];
    let v = sample_positivity_with_probes(&psi2, &[witness], 0, 42, 1e-10);
    ensure(v.is_violation() && v.samples_used == 1, "fixed witness not flagged first")?;
    notes.push(format!("fixed witness λ_min = {:.4}", v.witness.unwrap().lambda_min));
    Ok(format!("5 maps clean at 1e5 samples; {}", notes.join(", ")))
}

/// `|x1|²|x3|⁴ + |x2|²|x1|⁴ + |x3|²|x2|⁴ - |x1|²|x2|²|x3|² - 2|x1|² Re(x̄2² x3²)`.
fn psi3_det(x: &[Complex64]) -> f64 {
    let n = |z: Complex64| z.norm_sqr();
    n(x[0]) * n(x[2]).powi(2) + n(x[1]) * n(x[0]).powi(2) + n(x[2]) * n(x[1]).powi(2)
        - n(x[0]) * n(x[1]) * n(x[2])
        - 2.0 * n(x[0]) * (x[1].conj() * x[1].conj() * x[2] * x[2]).re
}

fn psi3_certificate() -> Check {
    let cert = psi3_positivity_certificate(10_000, 42).map_err(|e| e.to_string())?;
    ensure(cert.max_minor_deviation <= 1e-10, format!("minors differ by {}", cert.max_minor_deviation))?;
    ensure(cert.max_det_deviation <= 1e-9, format!("det off by {}", cert.max_det_deviation))?;
    ensure(cert.min_bound_slack >= -1e-12, format!("bound slack {}", cert.min_bound_slack))?;
    let (phi, psi3) = (ComplexMap::builtin(BuiltinMap::Choi), ComplexMap::builtin(BuiltinMap::Psi3));
    let mut rng = stream_rng(7, 3);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let x = random_unit_vector(&mut rng, 3);
        let x_mat = outer(&x);
        let (a, b) = (psi3.apply(&x_mat).unwrap(), phi.apply(&x_mat).unwrap());
        for k in 1..=3 {
            let d = (a.principal_minor(k).unwrap() - b.principal_minor(k).unwrap()).norm();
            ensure(d <= 1e-10, format!("d{k} differs by {d}"))?;
        }
        let formula = psi3_det(&x);
        worst = worst.max((det3(&a) - c(formula, 0.0)).norm());
        let bound =
            2.0 * x[0].norm_sqr() * (x[1].norm_sqr() * x[2].norm_sqr() - (x[1].conj().powi(2) * x[2].powi(2)).re);
        ensure(formula - bound >= -1e-12 && bound >= -1e-12, "AM-GM bound violated")?;
    }
    ensure(worst <= 1e-9, format!("closed form off by {worst}"))?;
    Ok(format!("10^4 points, det deviation {worst:.1e}, bound slack {:.1e}", cert.min_bound_slack))
}

fn extremality_evidence() -> Check {
    let psi1 = ComplexMap::builtin(BuiltinMap::Psi1);
    let d = transpose_difference();
    let phi = ComplexMap::builtin(BuiltinMap::Choi);
    let oracle = phi.compose_transpose().sub(&psi1).unwrap();
    ensure(d.maps_equal(&oracle, 1e-15), "direction is not Φ∘t - Ψ1")?;
    let ev = perturbation_extremality_probe(&psi1, &d, &PerturbationConfig::default()).map_err(|e| e.to_string())?;
    ensure(ev.max_epsilon >= 0.95, format!("Ψ1 max ε = {}", ev.max_epsilon))?;
    let cfg = PerturbationConfig { refine_steps: 0, ..Default::default() };
    let resolution = cfg.eps_grid[0];
    for k in 0..50 {
        let dir = random_hermitian_preserving(&mut stream_rng(42, 1000 + k), 3);
        ensure(!is_proportional(&phi, &dir, 1e-9), "random direction proportional to Φ")?;
        let e = perturbation_extremality_probe(&phi, &dir, &cfg).map_err(|e| e.to_string())?;
        ensure(e.max_epsilon < resolution, format!("direction {k}: Φ ± εD positive up to ε = {}", e.max_epsilon))?;
    }
    Ok(format!("Ψ1 max ε = {:.4}; Φ max ε = 0 on 50 random directions (grid from {resolution:e})", ev.max_epsilon))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn choi_form_value(x: &[BigRational], y: &[BigRational]) -> BigRational {
    let (x1, x2, x3) = (&x[0], &x[1], &x[2]);
    let (y1, y2, y3) = (&y[0], &y[1], &y[2]);
    (x1 * x1 + x3 * x3) * y1 * y1 + (x2 * x2 + x1 * x1) * y2 * y2 + (x3 * x3 + x2 * x2) * y3 * y3
        - q(2, 1) * (x1 * x2 * y1 * y2 + x2 * x3 * y2 * y3 + x3 * x1 * y3 * y1)
}

fn random_q(rng: &mut ChaCha8Rng) -> BigRational {
    q(rng.random_range(-9..=9), rng.random_range(1..=5))
}

fn form_correspondence() -> Check {
    let restriction = ComplexMap::builtin(BuiltinMap::Choi).restrict_to_symmetric(0.0).unwrap();
    let form = form_from_map(&restriction);
    ensure(form == choi_form::<f64>(), "Φ|S3 does not give the Choi form")?;
    ensure(map_from_form(&form) == restriction, "map_from_form does not invert")?;
    let exact: SymmetricRestriction<BigRational> = map_from_form(&choi_form::<BigRational>());
    let exact_form = form_from_map(&exact);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..200 {
        let x: Vec<_> = (0..3).map(|_| random_q(&mut rng)).collect();
        let y: Vec<_> = (0..3).map(|_| random_q(&mut rng)).collect();
        ensure(
            exact_form.evaluate(&x, &y).unwrap() == choi_form_value(&x, &y),
            "form value differs from the closed form",
        )?;
    }
    for _ in 0..100 {
        let images = (0..6)
            .map(|_| {
                let raw = Matrix::from_fn(3, |_, _| random_q(&mut rng));
                Matrix::from_fn(3, |r, k| &raw[(r, k)] + &raw[(k, r)])
            })
            .collect();
        let m = SymmetricRestriction::new(3, images).unwrap();
        ensure(map_from_form(&form_from_map(&m)) == m, "round trip not exact")?;
    }
    Ok(format!("{} coefficients exact, 100 rational round trips exact", form.terms().count()))
}

fn proposition_check() -> Check {
    for which in BuiltinMap::ALL {
        let ok = ComplexMap::builtin(which).proposition_hermitian_check(1e-12).map_err(|e| e.to_string())?;
        ensure(ok, format!("fails for {}", which.name()))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut hermitian = 0;
    for k in 0..100 {
        let m = random_real_preserving(&mut rng, 3, k % 2 == 0);
        ensure(m.proposition_hermitian_check(1e-12).map_err(|e| e.to_string())?, format!("fails for random map {k}"))?;
        hermitian += usize::from(m.preserves_hermitian(1e-12));
    }
    ensure(hermitian >= 50, "too few hermiticity-preserving fixtures")?;
    Ok(format!("6 builtins and 100 random maps ({hermitian} hermiticity-preserving)"))
}

fn cp_checks() -> Check {
    let phi = ComplexMap::builtin(BuiltinMap::Choi);
    let l = |m: &ComplexMap| m.choi_matrix().eigenvalues_hermitian(1e-9).unwrap()[0];
    let (a, b) = (l(&phi), l(&phi.compose_transpose()));
    ensure(a < -1e-6 && b < -1e-6, format!("λ_min {a}, {b}"))?;
    ensure(
        !phi.is_completely_positive(1e-10).unwrap() && !phi.is_completely_copositive(1e-10).unwrap(),
        "Φ classified as CP or co-CP",
    )?;
    let id = ComplexMap::identity(3);
    ensure(id.is_completely_positive(1e-10).unwrap(), "identity not CP")?;
    let t = ComplexMap::transpose_map(3);
    ensure(
        t.is_completely_copositive(1e-10).unwrap() && !t.is_completely_positive(1e-10).unwrap(),
        "transpose misclassified",
    )?;
    Ok(format!("λ_min C(Φ) = {a:.4}, λ_min C(Φ∘t) = {b:.4}"))
}

fn cross_validation() -> Check {
    let cv = cross_validate(50, 42).map_err(|e| e.to_string())?;
    let dev = cv.max_apply_deviation.max(cv.max_minor_deviation);
    ensure(dev <= 1e-9, format!("deviation {dev}"))?;
    Ok(format!("50 rational points, max relative deviation {dev:.1e}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("symbolic replay", symbolic_replay),
        ("Ψ2 counterexample", psi2_counterexample),
        ("positivity suite", positivity_suite),
        ("Ψ3 certificate", psi3_certificate),
        ("extremality evidence", extremality_evidence),
        ("form correspondence", form_correspondence),
        ("hermiticity proposition", proposition_check),
        ("CP / co-CP", cp_checks),
        ("exact/numeric cross-validation", cross_validation),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{:.2?}]", k + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
