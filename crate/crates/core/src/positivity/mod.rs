//! Numeric positivity tests on rank-one projectors, structured probes,
//! closed-form certificates and perturbation probes of extremality.
//!
//! A sampling run that finds nothing reports "no violation found"; it does
//! not establish positivity.

mod certificates;
mod extremality;
mod fit;
mod minimize;
mod probes;
mod sampling;

pub use certificates::{
    phase_covariance_check, psi3_check_point, psi3_det_bound, psi3_det_formula, psi3_positivity_certificate,
    Psi3Certificate, BOUND_TOL, DET_TOL, MINOR_TOL,
};
pub use extremality::{
    geometric_grid, is_proportional, perturbation_extremality_probe, EpsilonVerdict, ExtremalityEvidence,
    PerturbationConfig,
};
pub use fit::{default_grid, probe_minor_polynomial, probe_minor_value, Minor, MinorFit, FIT_TOL};
pub use minimize::{minimize_lambda_min, Minimum};
pub use probes::{ProbeFamily, ProbeInstance, ProbeVar, PAPER_FAMILIES};
pub use sampling::{
    normalize, random_unit_vector, sample_positivity, sample_positivity_with_probes, stream_rng, PositivityStatus,
    PositivityVerdict, RankOneEvaluator, Witness,
};
