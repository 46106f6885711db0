//! Verification toolkit for positive linear maps on `M_3`: the Choi map and
//! its companions, numeric positivity and extremality probes, the
//! biquadratic form correspondence, and an exact replay of the Choi map's
//! extremality argument.

pub mod cli;
pub mod eigen;
pub mod error;
pub mod forms;
pub mod maps;
pub mod matrix;
pub mod poly;
pub mod positivity;
pub mod replay;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use maps::{BuiltinMap, ComplexMap, LinearMap};
pub use matrix::{ComplexMatrix, Matrix};
