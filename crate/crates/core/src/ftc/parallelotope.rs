use crate::antiderivative::numeric_antiderivative;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::{Parallelotope, VertexLabel};
use crate::oracle::QuadratureConfig;
use crate::summation::compensated_sum;

use super::{IntegralResult, Method, VertexContribution};

/// Integral of `f` over `P` as a signed sum over the unit-box vertices of
/// an antiderivative of the pullback `f(φ(u))·|det T|`.
///
/// The antiderivative is evaluated at the 0/1 label points directly rather
/// than at `φ⁻¹` of the image vertices, which would only reproduce them up
/// to rounding.
pub fn integrate_parallelotope(
    f: &ScalarField,
    p: &Parallelotope,
    quad: &QuadratureConfig,
) -> Result<IntegralResult> {
    let g = f.pullback(p)?;
    let n = p.dim();
    let big_f = numeric_antiderivative(&g, &vec![0.0; n], quad)?;
    let order: Vec<VertexLabel> = VertexLabel::all(n)?.collect();
    let mut result = parallelotope_vertex_sum(&big_f.field, &p.marked(), &order)?;
    result.method = Method::Parallelotope;
    Ok(result)
}

/// `∑ⱼ (−1)^{d(Pⱼ, marked)} F(uⱼ)` visiting vertices in `order`, which must
/// be a permutation of all labels of the dimension.
pub fn parallelotope_vertex_sum(
    big_f: &ScalarField,
    marked: &VertexLabel,
    order: &[VertexLabel],
) -> Result<IntegralResult> {
    let n = marked.dim();
    if big_f.arity() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: big_f.arity(),
        });
    }
    let count = 1usize << n;
    let mut seen = vec![false; count];
    for label in order {
        if label.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: label.dim(),
            });
        }
        let slot = &mut seen[label.index() as usize];
        if *slot {
            return Err(Error::InvalidConfig(format!("vertex {label} listed twice")));
        }
        *slot = true;
    }
    if order.len() != count {
        return Err(Error::InvalidConfig(format!(
            "vertex order lists {} of {count} vertices",
            order.len()
        )));
    }
    let contributions = order
        .iter()
        .map(|label| {
            let d = label.graph_distance(marked)?;
            Ok(VertexContribution {
                label: *label,
                sign: if d % 2 == 0 { 1 } else { -1 },
                value: big_f.eval(&label.unit_point())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let value = compensated_sum(contributions.iter().map(|c| f64::from(c.sign) * c.value));
    Ok(IntegralResult {
        value,
        method: Method::Parallelotope,
        scale: 1.0,
        contributions,
        oracle: None,
    })
}
