use thiserror::Error;

use crate::expression::{EvalError, ParseError};

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be between 1 and {max}, got {found}")]
    InvalidDimension { found: usize, max: usize },

    #[error("a{axis} > b{axis} ({lower} > {upper})")]
    InvertedAxis { axis: usize, lower: f64, upper: f64 },

    #[error("non-finite coordinate on axis {axis}")]
    NonFiniteCoordinate { axis: usize },

    #[error("invalid cut {value} on axis {axis}: {reason}")]
    InvalidCut {
        axis: usize,
        value: f64,
        reason: &'static str,
    },

    #[error("singular edge matrix: |det T| = {det:e} below threshold {threshold:e}")]
    SingularMatrix { det: f64, threshold: f64 },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("not a polynomial: {0}")]
    NonPolynomial(String),

    #[error(
        "exact integration routes disagree: vertex sum {vertex_sum}, product form {product_form}"
    )]
    InconsistentOracle {
        vertex_sum: String,
        product_form: String,
    },

    #[error("quadrature needs {evaluations} evaluations, budget is {budget}")]
    BudgetExceeded { evaluations: f64, budget: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("query point below the base corner on axis {axis}: {value} < {corner}")]
    BelowCorner {
        axis: usize,
        value: f64,
        corner: f64,
    },

    #[error("difference step on axis {axis} must be positive, got {step}")]
    InvalidStep { axis: usize, step: f64 },

    #[error("difference stencil escapes the box on axis {axis}")]
    StencilEscapes { axis: usize },

    #[error("gauge term depends on axis {axis} (variation {deviation:e})")]
    GaugeDependence { axis: usize, deviation: f64 },

    #[error("degenerate triangle: area {area:e} below threshold {threshold:e}")]
    DegenerateTriangle { area: f64, threshold: f64 },

    #[error(
        "integrand not symmetric on QR about its midpoint: worst t = {t}, deviation {deviation:e} > {tolerance:e}"
    )]
    Asymmetric {
        t: f64,
        deviation: f64,
        tolerance: f64,
    },

    #[error("structural invariant violated: {0}")]
    Structural(String),
}

pub type Result<T> = std::result::Result<T, Error>;
