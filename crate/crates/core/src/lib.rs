//! Numerical laboratory for trace identities of nearly normal operator models.
//!
//! The crate studies finite truncations of operators `T = X + iY` whose
//! self-commutator `[T*, T] = 2D²` is positive and trace class. Three model
//! families are provided (unilateral shift, elliptic perturbations of it, and
//! a q-weighted shift), together with the machinery needed to compare
//! commutator corner traces against spectral-shift and principal-function
//! integrals:
//!
//! * [`linalg`] - dense Hermitian spectral calculus, commutators, corner
//!   traces, banded operators, and the divided-difference (double operator
//!   integral) transform.
//! * [`functions`] - polynomial and trigonometric test functions, separable
//!   bivariate symbols, Jacobians, quadrature.
//! * [`krein`] - spectral shift functions of Hermitian pairs and the exact
//!   trace identity `Tr{phi(H) - phi(H0)} = Int phi' xi`.
//! * [`models`] - the model zoo, winding-number principal functions, and
//!   hyponormality verification.
//! * [`principal`] - commutator trace checks, cumulative moments, the
//!   generalized trace formula, and principal-function reconstruction.
//! * [`config`], [`report`], [`experiments`] - the experiment driver behind
//!   the `principal-lab` binary.

pub mod config;
pub mod experiments;
pub mod functions;
pub mod krein;
pub mod linalg;
pub mod models;
pub mod principal;
pub mod report;

use thiserror::Error;

/// Errors shared across the laboratory modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A*| entry {max_asymmetry:e} exceeds {tolerance:e}")]
    NotHermitian { max_asymmetry: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix must be square and nonempty, got {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },

    #[error("corner dimension {corner} exceeds ambient dimension {dim}")]
    CornerExceedsDim { corner: usize, dim: usize },

    #[error("corner window {corner} too small for degree {degree}; need corner > {needed}")]
    WindowTooSmall { corner: usize, degree: usize, needed: usize },

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("model parameter {name} = {value} violates constraint: {constraint}")]
    InvalidModelParameter { name: &'static str, value: f64, constraint: &'static str },

    #[error("operation {op} is not available for model {model}")]
    UnsupportedModel { op: &'static str, model: &'static str },

    #[error("moment table (max degree {max_degree}) is missing entry ({p}, {q})")]
    IncompleteMomentTable { p: usize, q: usize, max_degree: usize },

    #[error("degenerate binning: {detail}")]
    DegenerateBins { detail: String },

    #[error("incompatible grid: {detail}")]
    IncompatibleGrid { detail: String },

    #[error("polynomial has non-real coefficients; Hermitian functional calculus needs real ones")]
    NonRealCoefficients,

    #[error("config error: {message}")]
    Config { message: String },

    #[error("i/o failure: {context}")]
    Io { context: String },
}

impl Error {
    pub fn config(message: impl Into<String>) -> Self {
        Error::Config { message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
