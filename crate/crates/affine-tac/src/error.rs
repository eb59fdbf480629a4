//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("parameter {at:?} lies outside the domain of chart `{chart}`")]
    OutsideDomain { chart: String, at: Vec<f64> },

    #[error(
        "degenerate jet in chart `{chart}` at {at:?}: relative smallest singular value \
         {sigma:.3e} is below {tol:.3e}"
    )]
    DegenerateJet {
        chart: String,
        at: Vec<f64>,
        sigma: f64,
        tol: f64,
    },

    #[error("transversality failure in chart `{chart}` at {at:?}: frame does not complement the tangent")]
    Transversality { chart: String, at: Vec<f64> },

    #[error("orientation degeneracy: induced volume vanished in chart `{chart}` at {at:?}")]
    OrientationDegeneracy { chart: String, at: Vec<f64> },

    #[error("numeric pathology: {0}")]
    Pathology(String),

    #[error("reduction failed: {0}")]
    Reduction(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("manifest error: {0}")]
    Manifest(String),
}

pub type Result<T> = std::result::Result<T, Error>;
