//! Vertex-sum evaluation of integrals.
//!
//! For an antiderivative `F` of `f` on `I = ∏ [aⱼ, bⱼ]`,
//! `∫_I f = ∑_{b ∈ 2ⁿ} (−1)^{#₀(b)} F(P_b)`.
//! Affine images of boxes use graph-distance signs from the marked vertex,
//! and a triangle whose integrand is symmetric on one side can be handled by
//! mirroring it into a parallelogram.

mod impossibility;
mod parallelotope;
mod triangle;

pub use impossibility::{
    count_matching_assignments, rectangle_symmetries, triangle_impossibility_check,
    ImpossibilityReport, Triangulation, TriangulationSearch, CORNER_NAMES, EQ2_PATTERN,
};
pub use parallelotope::{integrate_parallelotope, parallelotope_vertex_sum};
pub use triangle::{
    integrate_triangle_symmetric, symmetry_check, SymmetryReport, TriangleIntegral, TriangleOptions,
};

use crate::antiderivative::numeric_antiderivative;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::{Hypercuboid, VertexLabel};
use crate::oracle::QuadratureConfig;
use crate::summation::compensated_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    VertexSum,
    Parallelotope,
    Triangle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::VertexSum => "vertex-sum",
            Method::Parallelotope => "parallelotope",
            Method::Triangle => "triangle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexContribution {
    pub label: VertexLabel,
    pub sign: i8,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleComparison {
    pub value: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
}

impl OracleComparison {
    pub fn new(value: f64, oracle: f64) -> Self {
        let abs_diff = (value - oracle).abs();
        let rel_diff = if oracle != 0.0 {
            abs_diff / oracle.abs()
        } else {
            abs_diff
        };
        Self {
            value: oracle,
            abs_diff,
            rel_diff,
        }
    }
}

/// `value = scale · ∑ sign · F-value` over `contributions`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub method: Method,
    pub scale: f64,
    pub contributions: Vec<VertexContribution>,
    pub oracle: Option<OracleComparison>,
}

impl IntegralResult {
    /// Re-derive the value from the listed contributions.
    pub fn recompute(&self) -> f64 {
        self.scale
            * compensated_sum(
                self.contributions
                    .iter()
                    .map(|c| f64::from(c.sign) * c.value),
            )
    }

    pub fn with_oracle(mut self, oracle: f64) -> Self {
        self.oracle = Some(OracleComparison::new(self.value, oracle));
        self
    }
}

/// `∑_b (−1)^{#₀(b)} F(P_b)`, compensated, in label order.
///
/// On a box with a collapsed axis the vertices pair up across that axis at
/// identical points; those pairs are differenced first, so the result is
/// exactly `0.0`.
pub fn integrate_box(big_f: &ScalarField, h: &Hypercuboid) -> Result<IntegralResult> {
    if big_f.arity() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: big_f.arity(),
        });
    }
    let contributions = h
        .vertices_lex()
        .into_iter()
        .map(|(label, p)| {
            Ok(VertexContribution {
                label,
                sign: label.sign(),
                value: big_f.eval(&p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let value = match h.degenerate_axis() {
        Some(axis) => {
            let by_index = |l: VertexLabel| &contributions[l.index() as usize];
            compensated_sum(
                contributions
                    .iter()
                    .filter(|c| c.label.bit(axis))
                    .map(|upper| {
                        let lower = by_index(upper.label.with_bit(axis, false));
                        f64::from(upper.sign) * (upper.value - lower.value)
                    }),
            )
        }
        None => compensated_sum(contributions.iter().map(|c| f64::from(c.sign) * c.value)),
    };
    Ok(IntegralResult {
        value,
        method: Method::VertexSum,
        scale: 1.0,
        contributions,
        oracle: None,
    })
}

/// Build `F` from `f` by quadrature based at the lower corner, then take its
/// vertex sum. Every vertex with a zero bit lies on a face through the base
/// corner, so its contribution must be exactly zero.
pub fn integrate_box_from_f(
    f: &ScalarField,
    h: &Hypercuboid,
    quad: &QuadratureConfig,
) -> Result<IntegralResult> {
    let big_f = numeric_antiderivative(f, h.lower(), quad)?;
    let result = integrate_box(&big_f.field, h)?;
    let ones = VertexLabel::all_ones(h.dim())?;
    if let Some(c) = result
        .contributions
        .iter()
        .find(|c| c.label != ones && c.value != 0.0)
    {
        return Err(Error::Structural(format!(
            "vertex {} on a base face contributed {}",
            c.label, c.value
        )));
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositionReport {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
    pub pieces: usize,
}

/// Vertex sum over `h` against the total of vertex sums over a grid
/// subdivision of `h`.
pub fn compositionality_check(
    big_f: &ScalarField,
    h: &Hypercuboid,
    cuts: &[Vec<f64>],
) -> Result<CompositionReport> {
    let lhs = integrate_box(big_f, h)?.value;
    let parts = h.subdivide_grid(cuts)?;
    let values = parts
        .iter()
        .map(|p| integrate_box(big_f, p).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    let rhs = compensated_sum(values);
    Ok(CompositionReport {
        lhs,
        rhs,
        abs_diff: (lhs - rhs).abs(),
        pieces: parts.len(),
    })
}
