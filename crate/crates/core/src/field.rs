//! Scalar fields: deterministic, thread-safe maps `ℝⁿ → ℝ`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expression::{DomainErrorKind, EvalError, Expr};
use crate::geometry::Parallelotope;
use crate::polycalc::Polynomial;

type Evaluator = dyn Fn(&[f64]) -> Result<f64> + Send + Sync;

/// Where a field came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Expression(String),
    Polynomial(String),
    Builtin(String),
    Pullback,
    NumericAntiderivative,
    GaugeShifted,
    MirrorExtension,
}

/// A line `{z ∈ ℝ² : normal·z = offset}` across which a 2-D field is only
/// continuous. Quadrature over a field carrying one splits along it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakline {
    pub normal: [f64; 2],
    pub offset: f64,
}

impl Breakline {
    /// Signed side of `z`: `normal·z − offset`.
    pub fn side(&self, z: &[f64]) -> f64 {
        self.normal[0] * z[0] + self.normal[1] * z[1] - self.offset
    }
}

#[derive(Clone)]
pub struct ScalarField {
    arity: usize,
    eval: Arc<Evaluator>,
    provenance: Provenance,
    breakline: Option<Breakline>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("arity", &self.arity)
            .field("provenance", &self.provenance)
            .field("breakline", &self.breakline)
            .finish_non_exhaustive()
    }
}

impl ScalarField {
    pub fn new<F>(arity: usize, provenance: Provenance, f: F) -> Self
    where
        F: Fn(&[f64]) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            arity,
            eval: Arc::new(f),
            provenance,
            breakline: None,
        }
    }

    /// Wrap a plain Rust function. Non-finite outputs become evaluation errors.
    pub fn builtin<F>(name: &str, arity: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        let label = name.to_string();
        Self::new(arity, Provenance::Builtin(name.to_string()), move |x| {
            let v = f(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Eval(EvalError {
                    kind: DomainErrorKind::NonFinite,
                    subexpr: label.clone(),
                }))
            }
        })
    }

    pub fn constant(arity: usize, c: f64) -> Self {
        Self::builtin(&format!("{c}"), arity, move |_| c)
    }

    pub fn from_expr(expr: Expr) -> Self {
        let arity = expr.arity();
        let text = expr.to_string();
        Self::new(arity, Provenance::Expression(text), move |x| {
            expr.eval(x).map_err(Error::from)
        })
    }

    /// Floating-point evaluation of an exact polynomial.
    pub fn from_polynomial(p: Polynomial) -> Self {
        let arity = p.arity();
        let text = p.to_string();
        Self::new(arity, Provenance::Polynomial(text), move |x| {
            Ok(p.eval_f64(x))
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn breakline(&self) -> Option<&Breakline> {
        self.breakline.as_ref()
    }

    /// Attach a breakline. Only meaningful for 2-D fields.
    pub fn with_breakline(mut self, line: Breakline) -> Result<Self> {
        if self.arity != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.arity,
            });
        }
        self.breakline = Some(line);
        Ok(self)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: x.len(),
            });
        }
        (self.eval)(x)
    }

    /// Change-of-variables integrand `u ↦ f(origin + T·u) · |det T|` on the
    /// unit box. A breakline is carried over into `u` coordinates.
    pub fn pullback(&self, phi: &Parallelotope) -> Result<ScalarField> {
        if phi.dim() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: phi.dim(),
            });
        }
        let inner = self.clone();
        let map = phi.clone();
        let jacobian = phi.det().abs();
        let mut out = ScalarField::new(self.arity, Provenance::Pullback, move |u| {
            Ok(inner.eval(&map.map(u))? * jacobian)
        });
        if let Some(line) = self.breakline {
            let t = phi.edge_matrix();
            let o = phi.origin();
            let n = line.normal;
            out.breakline = Some(Breakline {
                normal: [
                    n[0] * t[(0, 0)] + n[1] * t[(1, 0)],
                    n[0] * t[(0, 1)] + n[1] * t[(1, 1)],
                ],
                offset: line.offset - (n[0] * o[0] + n[1] * o[1]),
            });
        }
        Ok(out)
    }
}
