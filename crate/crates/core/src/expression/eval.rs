use std::fmt;

use super::{BinOp, EvalError, Func, Node};

#[derive(Debug, Clone, PartialEq)]
pub enum DomainErrorKind {
    DivisionByZero,
    LogOfNonPositive(f64),
    SqrtOfNegative(f64),
    /// Negative base with a non-integer exponent, or zero to a negative power.
    PowDomain {
        base: f64,
        exponent: f64,
    },
    NonFinite,
    ArityMismatch {
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for DomainErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainErrorKind::DivisionByZero => write!(f, "division by zero"),
            DomainErrorKind::LogOfNonPositive(x) => write!(f, "log of non-positive value {x}"),
            DomainErrorKind::SqrtOfNegative(x) => write!(f, "sqrt of negative value {x}"),
            DomainErrorKind::PowDomain { base, exponent } => {
                write!(f, "{base} ^ {exponent} is not a real number")
            }
            DomainErrorKind::NonFinite => write!(f, "non-finite result"),
            DomainErrorKind::ArityMismatch { expected, found } => {
                write!(f, "expected a point of length {expected}, got {found}")
            }
        }
    }
}

fn fail(kind: DomainErrorKind, node: &Node) -> EvalError {
    EvalError {
        kind,
        subexpr: node.to_string(),
    }
}

fn real_pow(base: f64, exponent: f64, node: &Node) -> Result<f64, EvalError> {
    if base < 0.0 && exponent.fract() != 0.0 {
        return Err(fail(DomainErrorKind::PowDomain { base, exponent }, node));
    }
    if base == 0.0 && exponent < 0.0 {
        return Err(fail(DomainErrorKind::PowDomain { base, exponent }, node));
    }
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        Ok(base.powi(exponent as i32))
    } else {
        Ok(base.powf(exponent))
    }
}

pub(super) fn eval_node(node: &Node, x: &[f64]) -> Result<f64, EvalError> {
    let value = match node {
        Node::Number { value, .. } => *value,
        Node::Var(i) => x[*i],
        Node::Const(c) => c.value(),
        Node::Neg(e) => -eval_node(e, x)?,
        Node::Binary(op, a, b) => {
            let lhs = eval_node(a, x)?;
            let rhs = eval_node(b, x)?;
            match op {
                BinOp::Add => lhs + rhs,
                BinOp::Sub => lhs - rhs,
                BinOp::Mul => lhs * rhs,
                BinOp::Div => {
                    if rhs == 0.0 {
                        return Err(fail(DomainErrorKind::DivisionByZero, node));
                    }
                    lhs / rhs
                }
                BinOp::Pow => real_pow(lhs, rhs, node)?,
            }
        }
        Node::Call(func, args) => {
            let a = eval_node(&args[0], x)?;
            match func {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Tan => a.tan(),
                Func::Exp => a.exp(),
                Func::Log => {
                    if a <= 0.0 {
                        return Err(fail(DomainErrorKind::LogOfNonPositive(a), node));
                    }
                    a.ln()
                }
                Func::Sqrt => {
                    if a < 0.0 {
                        return Err(fail(DomainErrorKind::SqrtOfNegative(a), node));
                    }
                    a.sqrt()
                }
                Func::Abs => a.abs(),
                Func::Pow => real_pow(a, eval_node(&args[1], x)?, node)?,
            }
        }
    };
    if !value.is_finite() {
        return Err(fail(DomainErrorKind::NonFinite, node));
    }
    Ok(value)
}

/// Binding level used by the printer: higher binds tighter.
fn level(node: &Node) -> u8 {
    match node {
        Node::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        Node::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        Node::Binary(BinOp::Pow, ..) => 3,
        Node::Neg(_) => 4,
        _ => 5,
    }
}

struct Wrapped<'a>(&'a Node, bool);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Number { text, .. } => f.write_str(text),
            Node::Var(i) => write!(f, "x{}", i + 1),
            Node::Const(c) => f.write_str(c.name()),
            // unary := '-' unary | primary
            Node::Neg(e) => write!(f, "-{}", Wrapped(e, level(e) < 4)),
            Node::Binary(op, a, b) => {
                let (wrap_l, wrap_r) = match op {
                    BinOp::Add | BinOp::Sub => (false, level(b) <= 1),
                    BinOp::Mul | BinOp::Div => (level(a) < 2, level(b) <= 2),
                    // base is a unary, exponent is a factor
                    BinOp::Pow => (level(a) < 4, level(b) < 3),
                };
                if *op == BinOp::Pow {
                    write!(f, "{}^{}", Wrapped(a, wrap_l), Wrapped(b, wrap_r))
                } else {
                    write!(
                        f,
                        "{} {} {}",
                        Wrapped(a, wrap_l),
                        op.symbol(),
                        Wrapped(b, wrap_r)
                    )
                }
            }
            Node::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
