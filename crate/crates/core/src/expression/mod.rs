//! Real-valued expressions in the fixed variables `x1 … xn`.
//!
//! ```text
//! expr    := term (('+'|'-') term)* ;
//! term    := factor (('*'|'/') factor)* ;
//! factor  := unary ('^' factor)? ;
//! unary   := '-' unary | primary ;
//! primary := NUMBER | IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')' ;
//! ```
//!
//! Note that unary minus binds tighter than `^`: `-2^2` is `(-2)^2`.

mod eval;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

pub use eval::DomainErrorKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
    Pow,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
        Func::Pow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Pow => "pow",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Pow => 2,
            _ => 1,
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }
}

/// Syntax tree node. Number literals keep their source text so exact
/// consumers can recover the decimal value.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Number {
        value: f64,
        text: String,
    },
    /// 0-based variable index: `x1` is `Var(0)`.
    Var(usize),
    Const(Constant),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

impl Node {
    pub fn number(text: &str) -> Option<Node> {
        let value: f64 = text.parse().ok()?;
        value.is_finite().then(|| Node::Number {
            value,
            text: text.to_string(),
        })
    }

    pub fn binary(op: BinOp, lhs: Node, rhs: Node) -> Node {
        Node::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn negate(inner: Node) -> Node {
        Node::Neg(Box::new(inner))
    }

    /// Largest variable index used plus one.
    pub fn required_arity(&self) -> usize {
        match self {
            Node::Number { .. } | Node::Const(_) => 0,
            Node::Var(i) => i + 1,
            Node::Neg(e) => e.required_arity(),
            Node::Binary(_, a, b) => a.required_arity().max(b.required_arity()),
            Node::Call(_, args) => args.iter().map(Node::required_arity).max().unwrap_or(0),
        }
    }
}

/// A parsed expression together with its declared arity.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    arity: usize,
}

impl Expr {
    /// Wrap a hand-built tree. Fails when it uses a variable beyond `arity`
    /// or calls a function with the wrong number of arguments.
    pub fn new(root: Node, arity: usize) -> Result<Self, ParseError> {
        fn check(node: &Node, arity: usize) -> Result<(), ParseError> {
            match node {
                Node::Var(i) if *i >= arity => Err(ParseError::new(
                    0,
                    ParseErrorKind::UnknownVariable(format!("x{}", i + 1)),
                )),
                Node::Neg(e) => check(e, arity),
                Node::Binary(_, a, b) => {
                    check(a, arity)?;
                    check(b, arity)
                }
                Node::Call(f, args) => {
                    if args.len() != f.arity() {
                        return Err(ParseError::new(
                            0,
                            ParseErrorKind::Arity {
                                func: f.name(),
                                expected: f.arity(),
                                found: args.len(),
                            },
                        ));
                    }
                    args.iter().try_for_each(|a| check(a, arity))
                }
                _ => Ok(()),
            }
        }
        check(&root, arity)?;
        Ok(Self { root, arity })
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        eval(self, point)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

/// Parse `text` as an expression in `x1 … x{n_vars}`.
pub fn parse(text: &str, n_vars: usize) -> Result<Expr, ParseError> {
    parser::Parser::new(text, n_vars)?.parse()
}

/// Evaluate at `point`, which must have length `e.arity()`.
pub fn eval(e: &Expr, point: &[f64]) -> Result<f64, EvalError> {
    if point.len() != e.arity {
        return Err(EvalError {
            kind: DomainErrorKind::ArityMismatch {
                expected: e.arity,
                found: point.len(),
            },
            subexpr: e.to_string(),
        });
    }
    eval::eval_node(&e.root, point)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken {
        found: String,
        expected: &'static str,
    },
    UnexpectedEnd {
        expected: &'static str,
    },
    BadNumber(String),
    UnknownIdentifier(String),
    UnknownVariable(String),
    Arity {
        func: &'static str,
        expected: usize,
        found: usize,
    },
    NotAFunction(String),
    MissingArguments(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character '{c}'"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "unexpected {found}, expected {expected}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "unexpected end of input, expected {expected}")
            }
            ParseErrorKind::BadNumber(s) => write!(f, "invalid number literal '{s}'"),
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier {s}"),
            ParseErrorKind::UnknownVariable(s) => write!(f, "unknown variable {s}"),
            ParseErrorKind::Arity {
                func,
                expected,
                found,
            } => write!(f, "{func} takes {expected} argument(s), got {found}"),
            ParseErrorKind::NotAFunction(s) => write!(f, "{s} is not a function"),
            ParseErrorKind::MissingArguments(s) => write!(f, "{s} requires an argument list"),
        }
    }
}

/// Parse failure with the byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(offset: usize, kind: ParseErrorKind) -> Self {
        Self { offset, kind }
    }

    /// Two-line rendering: the source followed by a caret under the offset.
    pub fn underline(&self, source: &str) -> String {
        let col = source
            .get(..self.offset.min(source.len()))
            .map(|s| s.chars().count())
            .unwrap_or(0);
        format!("{source}\n{}^", " ".repeat(col))
    }
}

/// Evaluation failure, carrying the printed sub-expression that failed.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} in '{subexpr}'")]
pub struct EvalError {
    pub kind: DomainErrorKind,
    pub subexpr: String,
}
