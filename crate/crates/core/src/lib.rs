//! n-dimensional antiderivatives and their vertex sums.
//!
//! An integral of `f` over a box `∏ [aⱼ, bⱼ]` equals the alternating sum of
//! any `F` with `∂₁⋯∂ₙF = f` over the box's `2ⁿ` vertices. This crate builds
//! such `F` numerically or exactly, evaluates the sums over boxes, affine
//! images of boxes and mirror-symmetric triangles, and checks every result
//! against independent quadrature and Monte Carlo oracles.

pub mod antiderivative;
pub mod cli;
pub mod error;
pub mod expression;
pub mod field;
pub mod ftc;
pub mod geometry;
pub mod oracle;
pub mod polycalc;
pub mod summation;

pub use error::{Error, Result};
pub use field::ScalarField;
pub use geometry::{Hypercuboid, Parallelotope, VertexLabel};
