//! Numeric antiderivatives `F` with `∂₁⋯∂ₙF = f`, and checks of that PDE.
//!
//! The iterated integral `∫_{aₙ}^{xₙ} ⋯ ∫_{a₁}^{x₁} f` is evaluated as one
//! tensor-product quadrature over the sub-box `∏ [aⱼ, xⱼ]`, which equals the
//! nested form by Fubini.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Provenance, ScalarField};
use crate::ftc::integrate_box;
use crate::geometry::Hypercuboid;
use crate::oracle::{gauss_legendre_box, gauss_legendre_split_rect, QuadratureConfig};

/// How an antiderivative was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum Base {
    /// Built by quadrature from this base corner.
    Corner(Vec<f64>),
    UserSupplied,
}

#[derive(Debug, Clone)]
pub struct Antiderivative {
    pub field: ScalarField,
    pub base: Base,
}

impl Antiderivative {
    pub fn user_supplied(field: ScalarField) -> Self {
        Self {
            field,
            base: Base::UserSupplied,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.field.eval(x)
    }
}

/// `F(x) = ∫_{[corner, x]} f`, defined for `x ≥ corner` componentwise.
///
/// `F` is exactly `0.0` whenever some `xⱼ = aⱼ`. Points below the corner are
/// rejected. Fields carrying a breakline are integrated piecewise.
pub fn numeric_antiderivative(
    f: &ScalarField,
    corner: &[f64],
    quad: &QuadratureConfig,
) -> Result<Antiderivative> {
    let n = f.arity();
    if corner.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: corner.len(),
        });
    }
    if let Some(axis) = corner.iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFiniteCoordinate { axis: axis + 1 });
    }
    let integrand = f.clone();
    let a = corner.to_vec();
    let cfg = *quad;
    let field = ScalarField::new(n, Provenance::NumericAntiderivative, move |x| {
        for (j, (&xj, &aj)) in x.iter().zip(&a).enumerate() {
            if xj < aj {
                return Err(Error::BelowCorner {
                    axis: j + 1,
                    value: xj,
                    corner: aj,
                });
            }
        }
        if x.iter().zip(&a).any(|(xj, aj)| xj == aj) {
            return Ok(0.0);
        }
        match integrand.breakline() {
            Some(line) => {
                gauss_legendre_split_rect(&integrand, [a[0], a[1]], [x[0], x[1]], line, &cfg)
            }
            None => gauss_legendre_box(&integrand, &Hypercuboid::new(a.clone(), x.to_vec())?, &cfg),
        }
    });
    Ok(Antiderivative {
        field,
        base: Base::Corner(corner.to_vec()),
    })
}

/// Central-difference estimate of `∂₁⋯∂ₙF` at `x`: the vertex sum of `F`
/// over `∏ [xⱼ − hⱼ, xⱼ + hⱼ]` divided by `∏ 2hⱼ`.
pub fn mixed_partial(f: &ScalarField, x: &[f64], h: &[f64]) -> Result<f64> {
    let n = f.arity();
    for len in [x.len(), h.len()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    for (j, &hj) in h.iter().enumerate() {
        if !hj.is_finite() || hj <= 0.0 {
            return Err(Error::InvalidStep {
                axis: j + 1,
                step: hj,
            });
        }
    }
    let lower = x.iter().zip(h).map(|(x, h)| x - h).collect();
    let upper = x.iter().zip(h).map(|(x, h)| x + h).collect();
    let stencil = Hypercuboid::new(lower, upper)?;
    let volume: f64 = h.iter().map(|h| 2.0 * h).product();
    Ok(integrate_box(f, &stencil)?.value / volume)
}

/// `hⱼ = 10⁻³ · (bⱼ − aⱼ)`.
pub fn default_steps(h: &Hypercuboid) -> Vec<f64> {
    (0..h.dim()).map(|j| 1e-3 * h.extent(j)).collect()
}

/// Outcome of [`check_antiderivative`].
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub points_checked: usize,
    pub max_abs_deviation: f64,
    /// `max_abs_deviation` over `max |f|` on the grid (1 if `f` vanishes there).
    pub max_rel_deviation: f64,
    pub scale: f64,
    pub worst_point: Vec<f64>,
    pub worst_mixed_partial: f64,
    pub worst_integrand: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compare the central-difference mixed partial of `big_f` with `f` on an
/// `m`-per-axis cell-centred grid over `∏ [aⱼ + hⱼ, bⱼ − hⱼ]`.
///
/// Deviations are measured relative to the largest `|f|` on the grid, which
/// keeps the test meaningful where `f` crosses zero.
pub fn check_antiderivative(
    f: &ScalarField,
    big_f: &ScalarField,
    h_box: &Hypercuboid,
    m: usize,
    h: &[f64],
    tol: f64,
) -> Result<CheckReport> {
    let n = h_box.dim();
    for arity in [f.arity(), big_f.arity(), h.len()] {
        if arity != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: arity,
            });
        }
    }
    if m == 0 {
        return Err(Error::InvalidConfig(
            "grid needs at least one point per axis".into(),
        ));
    }
    for (j, &hj) in h.iter().enumerate() {
        if hj.is_nan() || hj <= 0.0 {
            return Err(Error::InvalidStep {
                axis: j + 1,
                step: hj,
            });
        }
        if 2.0 * hj >= h_box.extent(j) {
            return Err(Error::StencilEscapes { axis: j + 1 });
        }
    }

    let coords: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let lo = h_box.lower()[j] + h[j];
            let span = h_box.extent(j) - 2.0 * h[j];
            (0..m)
                .map(|k| lo + span * (k as f64 + 0.5) / m as f64)
                .collect()
        })
        .collect();

    let total = m.pow(n as u32);
    let mut samples = Vec::with_capacity(total);
    let mut index = vec![0usize; n];
    for _ in 0..total {
        let x: Vec<f64> = index
            .iter()
            .enumerate()
            .map(|(j, &k)| coords[j][k])
            .collect();
        let target = f.eval(&x)?;
        let estimate = mixed_partial(big_f, &x, h)?;
        samples.push((x, estimate, target));
        for j in (0..n).rev() {
            index[j] += 1;
            if index[j] < m {
                break;
            }
            index[j] = 0;
        }
    }

    let max_f = samples.iter().map(|(_, _, t)| t.abs()).fold(0.0, f64::max);
    let scale = if max_f > 0.0 { max_f } else { 1.0 };
    let (mut worst, mut max_abs) = (0, -1.0);
    for (i, (_, est, target)) in samples.iter().enumerate() {
        let d = (est - target).abs();
        if d > max_abs {
            max_abs = d;
            worst = i;
        }
    }
    let max_rel = max_abs / scale;
    let (worst_point, worst_mixed_partial, worst_integrand) = samples.swap_remove(worst);
    Ok(CheckReport {
        points_checked: total,
        max_abs_deviation: max_abs,
        max_rel_deviation: max_rel,
        scale,
        worst_point,
        worst_mixed_partial,
        worst_integrand,
        tolerance: tol,
        passed: max_rel <= tol,
    })
}

/// Number of random paired probes per declared axis.
pub const GAUGE_PROBES: usize = 8;
const GAUGE_SEED: u64 = 0x0067_6175_6765;

/// `F + C` where `C` is claimed constant along each axis in `constant_axes`
/// (0-based). The claim is spot-checked at random point pairs inside `probe`
/// differing only along the declared axis.
pub fn gauge_add(
    big_f: &ScalarField,
    c: &ScalarField,
    constant_axes: &[usize],
    probe: &Hypercuboid,
) -> Result<ScalarField> {
    let n = big_f.arity();
    for arity in [c.arity(), probe.dim()] {
        if arity != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: arity,
            });
        }
    }
    if constant_axes.is_empty() {
        return Err(Error::InvalidConfig(
            "gauge term needs at least one constant axis".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(GAUGE_SEED);
    let sample =
        |j: usize, rng: &mut ChaCha8Rng| probe.lower()[j] + probe.extent(j) * rng.random::<f64>();
    for &axis in constant_axes {
        if axis >= n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: axis + 1,
            });
        }
        for _ in 0..GAUGE_PROBES {
            let mut p: Vec<f64> = (0..n).map(|j| sample(j, &mut rng)).collect();
            let v0 = c.eval(&p)?;
            p[axis] = sample(axis, &mut rng);
            let v1 = c.eval(&p)?;
            let deviation = (v1 - v0).abs();
            if deviation > 1e-12 * v0.abs().max(1.0) {
                return Err(Error::GaugeDependence {
                    axis: axis + 1,
                    deviation,
                });
            }
        }
    }
    let (f, c) = (big_f.clone(), c.clone());
    Ok(ScalarField::new(n, Provenance::GaugeShifted, move |x| {
        Ok(f.eval(x)? + c.eval(x)?)
    }))
}
