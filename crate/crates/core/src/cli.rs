//! Command-line front end. Commands return their rendered output and an
//! exit status; `main` only prints and exits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{form_from_map, BiquadraticForm};
use crate::maps::random::random_hermitian_preserving;
use crate::maps::{BuiltinMap, ComplexMap, MapSpec};
use crate::matrix::{rank_one_projector, ComplexMatrix};
use crate::positivity::{
    minimize_lambda_min, perturbation_extremality_probe, sample_positivity, stream_rng, ExtremalityEvidence, Minimum,
    PerturbationConfig, PositivityVerdict,
};
use crate::replay::replay_choi_extremality;
use crate::report::{transpose_difference, verify_paper, PaperConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "choimap", version, about = "Positivity and extremality checks for maps on 3x3 matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Builtin map name (choi, transpose, identity, psi1, psi2, psi3) or a
    /// JSON map spec file.
    #[arg(long, global = true, default_value = "choi")]
    pub map: String,
    #[arg(long, global = true, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every check and fail if any claim does not hold.
    VerifyPaper {
        /// Map spec used in place of the builtin Ψ2.
        #[arg(long)]
        psi2: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        probe_samples: u64,
        #[arg(long, default_value_t = 10_000)]
        cert_samples: usize,
        #[arg(long, default_value_t = 50)]
        cross_points: usize,
    },
    /// Seeded sampling plus local search for λ_min(φ(x x*)) < 0.
    Positivity {
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, default_value_t = 300)]
        iters: usize,
    },
    /// Largest ε with φ ± εD positive.
    Extremality {
        /// `transpose-difference` for ½(Φ∘t - Φ), a builtin name, or a spec file.
        #[arg(long, default_value = "transpose-difference")]
        direction: String,
        /// Test this many random hermiticity-preserving directions instead.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 10_000)]
        probe_samples: u64,
    },
    /// φ(x x*) and its eigenvalues.
    Eval {
        /// Comma-separated complex entries, e.g. `1,2-i,-1-i`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Biquadratic form of φ on symmetric matrices at real `(x, y)`.
    FormEval {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// JSON form file used instead of `--map`.
        #[arg(long)]
        form: Option<PathBuf>,
    },
    /// Choi matrix, its spectrum, and the CP / co-CP verdicts.
    ChoiMatrix,
    /// Exact replay of the Choi map's extremality argument.
    Replay,
    /// Print the JSON spec of the selected map.
    Spec,
}

/// Rendered output and process exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self { output, code: 0 }
    }
}

/// Exit status for an error: 2 for bad input, 1 for a failed check.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::UnknownMap(_) | Error::Io(_) | Error::Json(_) | Error::UnregisteredVariable(_) => 2,
        _ => 1,
    }
}

/// Builtin name or path to a JSON map spec.
pub fn load_map(selector: &str) -> Result<ComplexMap> {
    if let Ok(b) = BuiltinMap::from_str(selector) {
        return Ok(ComplexMap::builtin(b));
    }
    let path = Path::new(selector);
    if path.exists() {
        let m = MapSpec::load(path)?;
        if m.dim() != 3 {
            return Err(Error::Parse(format!("{selector}: only maps on M_3 are supported")));
        }
        return Ok(m);
    }
    Err(Error::UnknownMap(selector.to_string()))
}

pub fn parse_vector(src: &str) -> Result<Vec<Complex64>> {
    let v = src
        .split(',')
        .map(|s| {
            let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            Complex64::from_str(&s).map_err(|_| Error::Parse(format!("bad complex number `{s}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if v.len() != 3 {
        return Err(Error::Parse(format!("expected 3 entries, found {}", v.len())));
    }
    Ok(v)
}

fn parse_real_vector(src: &str) -> Result<Vec<f64>> {
    parse_vector(src)?
        .into_iter()
        .map(|z| if z.im == 0.0 { Ok(z.re) } else { Err(Error::Parse(format!("`{z}` is not real"))) })
        .collect()
}

fn num(x: f64) -> String {
    let x = if x.abs() < 5e-7 { 0.0 } else { x };
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{x:.0}")
    } else {
        let s = format!("{x:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn complex(z: Complex64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => num(z.re),
        (true, false) => format!("{}i", num(z.im)),
        _ if z.im < 0.0 => format!("{}-{}i", num(z.re), num(-z.im)),
        _ => format!("{}+{}i", num(z.re), num(z.im)),
    }
}

fn matrix_text(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let cells: Vec<String> = m.entries().iter().map(|&z| complex(z)).collect();
    let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
    let mut out = String::new();
    for r in 0..n {
        let row: Vec<String> = (0..n).map(|c| format!("{:>width$}", cells[r * n + c])).collect();
        let _ = writeln!(out, "  [ {} ]", row.join("  "));
    }
    out
}

fn list(v: &[f64]) -> String {
    v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(value)? + "\n"),
        Format::Text => Ok(text(value)),
    }
}

#[derive(Serialize)]
struct PositivityReport {
    map: String,
    samples: u64,
    seed: u64,
    tol: f64,
    sampling: PositivityVerdict,
    local_search: Option<Minimum>,
    violation: bool,
}

#[derive(Serialize)]
struct DirectionResult {
    direction: String,
    max_epsilon: f64,
    proportional: bool,
    evidence: ExtremalityEvidence,
}

#[derive(Serialize)]
struct ExtremalityReport {
    map: String,
    seed: u64,
    results: Vec<DirectionResult>,
}

#[derive(Serialize)]
struct EvalReport {
    map: String,
    x: Vec<Complex64>,
    image: ComplexMatrix,
    eigenvalues: Vec<f64>,
    psd: bool,
}

#[derive(Serialize)]
struct FormEvalReport {
    x: Vec<f64>,
    y: Vec<f64>,
    value: f64,
}

#[derive(Serialize)]
struct ChoiReport {
    map: String,
    choi_matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
    partial_transpose_eigenvalues: Vec<f64>,
    cp: bool,
    co_cp: bool,
}

fn positivity(cli: &Cli, restarts: usize, iters: usize) -> Result<Outcome> {
    let map = load_map(&cli.map)?;
    let sampling = sample_positivity(&map, cli.samples, cli.seed, cli.tol);
    let local_search = (restarts > 0).then(|| minimize_lambda_min(&map, restarts, iters, cli.seed));
    let violation = sampling.is_violation() || local_search.as_ref().is_some_and(|m| m.lambda_min < -cli.tol);
    let report = PositivityReport {
        map: cli.map.clone(),
        samples: cli.samples,
        seed: cli.seed,
        tol: cli.tol,
        sampling,
        local_search,
        violation,
    };
    let out = render(cli.format, &report, |r| {
        let mut s = format!("map: {}\n", r.map);
        match &r.sampling.witness {
            Some(w) => {
                let x: Vec<String> = w.x.iter().map(|&z| complex(z)).collect();
                let _ = writeln!(
                    s,
                    "sampling: violation after {} vectors, λ_min = {}, x = ({})",
                    r.sampling.samples_used,
                    num(w.lambda_min),
                    x.join(", ")
                );
            }
            None => {
                let _ = writeln!(
                    s,
                    "sampling: no violation found in {} vectors (seed {}, tol {:e})",
                    r.sampling.samples_used, r.seed, r.tol
                );
            }
        }
        if let Some(m) = &r.local_search {
            let x: Vec<String> = m.x.iter().map(|&z| complex(z)).collect();
            let _ = writeln!(s, "local search: least λ_min = {} at x = ({})", num(m.lambda_min), x.join(", "));
        }
        let _ = writeln!(s, "verdict: {}", if r.violation { "violation" } else { "no violation found" });
        s
    })?;
    Ok(Outcome::ok(out))
}

fn extremality(cli: &Cli, direction: &str, random: usize, probe_samples: u64) -> Result<Outcome> {
    let map = load_map(&cli.map)?;
    let cfg = PerturbationConfig { samples: probe_samples, seed: cli.seed, tol: cli.tol, ..Default::default() };
    let directions: Vec<(String, ComplexMap)> = if random > 0 {
        (0..random)
            .map(|k| {
                (format!("random #{k}"), random_hermitian_preserving(&mut stream_rng(cli.seed, 1 << 50 | k as u64), 3))
            })
            .collect()
    } else if direction == "transpose-difference" {
        vec![("½(Φ∘t - Φ)".to_string(), transpose_difference())]
    } else {
        vec![(direction.to_string(), load_map(direction)?)]
    };
    let results = directions
        .into_iter()
        .map(|(name, d)| {
            let evidence = perturbation_extremality_probe(&map, &d, &cfg)?;
            Ok(DirectionResult {
                direction: name,
                max_epsilon: evidence.max_epsilon,
                proportional: evidence.proportional,
                evidence,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = ExtremalityReport { map: cli.map.clone(), seed: cli.seed, results };
    let out = render(cli.format, &report, |r| {
        let mut s = format!("map: {}\n", r.map);
        for d in &r.results {
            let _ = writeln!(s, "{}: max ε = {}, proportional = {}", d.direction, num(d.max_epsilon), d.proportional);
        }
        s
    })?;
    Ok(Outcome::ok(out))
}

fn eval(cli: &Cli, x: &str) -> Result<Outcome> {
    let map = load_map(&cli.map)?;
    let x = parse_vector(x)?;
    let image = map.apply(&rank_one_projector(&x)?)?;
    let eigenvalues = image.eigenvalues_hermitian(1e-9)?;
    let psd = eigenvalues[0] >= -cli.tol;
    let report = EvalReport { map: cli.map.clone(), x, image, eigenvalues, psd };
    let out = render(cli.format, &report, |r| {
        format!("φ(x x*) =\n{}eigenvalues: {}\npsd: {}\n", matrix_text(&r.image), list(&r.eigenvalues), r.psd)
    })?;
    Ok(Outcome::ok(out))
}

fn form_eval(cli: &Cli, x: &str, y: &str, form: Option<&Path>) -> Result<Outcome> {
    let b = match form {
        Some(p) => BiquadraticForm::load(p)?,
        None => form_from_map(&load_map(&cli.map)?.restrict_to_symmetric(cli.tol)?),
    };
    let (x, y) = (parse_real_vector(x)?, parse_real_vector(y)?);
    let value = b.evaluate(&x, &y)?;
    let report = FormEvalReport { x, y, value };
    Ok(Outcome::ok(render(cli.format, &report, |r| format!("{}\n", num(r.value)))?))
}

fn choi(cli: &Cli) -> Result<Outcome> {
    let map = load_map(&cli.map)?;
    let c = map.choi_matrix();
    let eigenvalues = c.eigenvalues_hermitian(1e-9)?;
    let partial_transpose_eigenvalues = map.compose_transpose().choi_matrix().eigenvalues_hermitian(1e-9)?;
    let report = ChoiReport {
        map: cli.map.clone(),
        cp: eigenvalues[0] >= -cli.tol,
        co_cp: partial_transpose_eigenvalues[0] >= -cli.tol,
        choi_matrix: c,
        eigenvalues,
        partial_transpose_eigenvalues,
    };
    let out = render(cli.format, &report, |r| {
        format!(
            "Choi matrix of {}:\n{}eigenvalues: {}\neigenvalues after composing with t: {}\nCP: {}\nco-CP: {}\n",
            r.map,
            matrix_text(&r.choi_matrix),
            list(&r.eigenvalues),
            list(&r.partial_transpose_eigenvalues),
            r.cp,
            r.co_cp
        )
    })?;
    Ok(Outcome::ok(out))
}

/// Runs one command.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::VerifyPaper { psi2, probe_samples, cert_samples, cross_points } => {
            let cfg = PaperConfig {
                seed: cli.seed,
                tol: cli.tol,
                probe_samples: *probe_samples,
                cert_samples: *cert_samples,
                cross_points: *cross_points,
                psi2: psi2.as_deref().map(load_map).transpose()?,
            };
            let report = verify_paper(&cfg);
            let mut output = match cli.format {
                Format::Json => report.to_json()? + "\n",
                Format::Text => report.to_text(),
            };
            if cli.format == Format::Text && !report.passed {
                let _ = writeln!(output, "failed: {}", report.failures().join(", "));
            }
            Ok(Outcome { output, code: if report.passed { 0 } else { 1 } })
        }
        Command::Positivity { restarts, iters } => positivity(cli, *restarts, *iters),
        Command::Extremality { direction, random, probe_samples } => {
            extremality(cli, direction, *random, *probe_samples)
        }
        Command::Eval { x } => eval(cli, x),
        Command::FormEval { x, y, form } => form_eval(cli, x, y, form.as_deref()),
        Command::ChoiMatrix => choi(cli),
        Command::Replay => {
            let r = replay_choi_extremality()?;
            let output = match cli.format {
                Format::Json => r.to_json()? + "\n",
                Format::Text => r.to_text(),
            };
            Ok(Outcome { output, code: if r.conclusion { 0 } else { 1 } })
        }
        Command::Spec => {
            let spec = MapSpec::from_map(&load_map(&cli.map)?);
            Ok(Outcome::ok(serde_json::to_string_pretty(&spec)? + "\n"))
        }
    }
}

/// Parses `args`, runs the command, and writes the output to `--out` or
/// stdout. Returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(o) => {
            match &cli.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &o.output) {
                        eprintln!("error: {}: {e}", p.display());
                        return 2;
                    }
                }
                None => print!("{}", o.output),
            }
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}
