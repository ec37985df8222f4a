use crate::error::{Error, Result};
use crate::field::{Breakline, Provenance, ScalarField};
use crate::geometry::Parallelotope;
use crate::oracle::QuadratureConfig;

use super::{integrate_parallelotope, IntegralResult, Method};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleOptions {
    /// Relative to `max |f|` over the sampled points.
    pub sym_tol: f64,
    /// Interior parameters `t = k / (sym_samples + 1)`.
    pub sym_samples: usize,
}

impl Default for TriangleOptions {
    fn default() -> Self {
        Self {
            sym_tol: 1e-9,
            sym_samples: 17,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport {
    pub samples: usize,
    pub worst_t: f64,
    pub max_deviation: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleIntegral {
    pub result: IntegralResult,
    pub symmetry: SymmetryReport,
    /// `S = Q + R − P`.
    pub mirror_vertex: [f64; 2],
    pub parallelogram_value: f64,
}

/// Compare `f(M + t·d)` with `f(M − t·d)` where `M` is the midpoint of `QR`
/// and `d = (R − Q)/2`.
pub fn symmetry_check(
    f: &ScalarField,
    q: [f64; 2],
    r: [f64; 2],
    opts: &TriangleOptions,
) -> Result<SymmetryReport> {
    if opts.sym_samples == 0 || opts.sym_tol.is_nan() || opts.sym_tol < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "symmetry check needs samples > 0 and tol >= 0, got {} and {}",
            opts.sym_samples, opts.sym_tol
        )));
    }
    let m = [(q[0] + r[0]) / 2.0, (q[1] + r[1]) / 2.0];
    let d = [(r[0] - q[0]) / 2.0, (r[1] - q[1]) / 2.0];
    let mut scale = 0.0f64;
    let mut worst_t = 0.0;
    let mut max_deviation = 0.0f64;
    for k in 1..=opts.sym_samples {
        let t = k as f64 / (opts.sym_samples + 1) as f64;
        let plus = f.eval(&[m[0] + t * d[0], m[1] + t * d[1]])?;
        let minus = f.eval(&[m[0] - t * d[0], m[1] - t * d[1]])?;
        scale = scale.max(plus.abs()).max(minus.abs());
        let dev = (plus - minus).abs();
        if dev > max_deviation {
            max_deviation = dev;
            worst_t = t;
        }
    }
    let tolerance = opts.sym_tol * scale;
    Ok(SymmetryReport {
        samples: opts.sym_samples,
        worst_t,
        max_deviation,
        scale,
        tolerance,
        passed: max_deviation <= tolerance,
    })
}

/// `∫_{PQR} f` as half the parallelogram `P, Q, S, R` integral of the
/// extension `f̃`, which is `f` on `PQR` and `z ↦ f(Q + R − z)` beyond `QR`.
///
/// The parallelogram is `φ(u) = P + [Q − P | R − P]·u`, so `φ(1,1) = S`.
/// `f̃` is continuous only when `f` is symmetric on `QR`, which is checked
/// first; its kink along `QR` is passed to the quadrature as a breakline.
pub fn integrate_triangle_symmetric(
    f: &ScalarField,
    p: [f64; 2],
    q: [f64; 2],
    r: [f64; 2],
    quad: &QuadratureConfig,
    opts: &TriangleOptions,
) -> Result<TriangleIntegral> {
    if f.arity() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.arity(),
        });
    }
    for (j, v) in p.iter().chain(&q).chain(&r).enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteCoordinate { axis: j % 2 + 1 });
        }
    }
    let e1 = [q[0] - p[0], q[1] - p[1]];
    let e2 = [r[0] - p[0], r[1] - p[1]];
    let area = (e1[0] * e2[1] - e1[1] * e2[0]).abs() / 2.0;
    let dist = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
    let perimeter = dist(p, q) + dist(q, r) + dist(r, p);
    let threshold = 1e-12 * (perimeter / 3.0).powi(2);
    if area.is_nan() || area < threshold || area == 0.0 {
        return Err(Error::DegenerateTriangle { area, threshold });
    }

    let symmetry = symmetry_check(f, q, r, opts)?;
    if !symmetry.passed {
        return Err(Error::Asymmetric {
            t: symmetry.worst_t,
            deviation: symmetry.max_deviation,
            tolerance: symmetry.tolerance,
        });
    }

    let s = [q[0] + r[0] - p[0], q[1] + r[1] - p[1]];
    let normal = [-(r[1] - q[1]), r[0] - q[0]];
    let line = Breakline {
        normal,
        offset: normal[0] * q[0] + normal[1] * q[1],
    };
    let p_side = line.side(&p).signum();
    let qr = [q[0] + r[0], q[1] + r[1]];
    let inner = f.clone();
    let extended = ScalarField::new(2, Provenance::MirrorExtension, move |z| {
        if line.side(z) * p_side >= 0.0 {
            inner.eval(z)
        } else {
            inner.eval(&[qr[0] - z[0], qr[1] - z[1]])
        }
    })
    .with_breakline(line)?;

    let phi = Parallelotope::new(p.to_vec(), vec![e1.to_vec(), e2.to_vec()])?;
    let parallelogram = integrate_parallelotope(&extended, &phi, quad)?;
    let parallelogram_value = parallelogram.value;
    let result = IntegralResult {
        value: 0.5 * parallelogram_value,
        method: Method::Triangle,
        scale: 0.5,
        contributions: parallelogram.contributions,
        oracle: None,
    };
    Ok(TriangleIntegral {
        result,
        symmetry,
        mirror_vertex: s,
        parallelogram_value,
    })
}
