//! Text formats for boxes, vectors and matrices on the command line.

use num_rational::BigRational;

use crate::error::Error;
use crate::expression::{parse, Expr};
use crate::polycalc::poly_from_expr;

use super::CliError;

/// A scalar written as a constant expression, e.g. `pi/2`.
#[derive(Debug, Clone)]
pub struct Scalar {
    pub text: String,
    pub expr: Expr,
    pub value: f64,
}

impl Scalar {
    pub fn parse(flag: &'static str, text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        let expr = parse(text, 0).map_err(|e| CliError::parse(flag, text, e))?;
        let value = expr.eval(&[]).map_err(Error::from)?;
        Ok(Self {
            text: text.to_string(),
            expr,
            value,
        })
    }

    pub fn exact(&self) -> Result<BigRational, CliError> {
        poly_from_expr(&self.expr)?
            .as_constant()
            .ok_or_else(|| Error::NonPolynomial(self.text.clone()).into())
    }
}

fn split_list<'a>(flag: &'static str, text: &'a str, sep: char) -> Result<Vec<&'a str>, CliError> {
    let parts: Vec<&str> = text.split(sep).map(str::trim).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Usage(format!(
            "--{flag}: empty entry in '{text}'"
        )));
    }
    Ok(parts)
}

/// `"a1:b1,a2:b2,…"`.
pub fn parse_box(text: &str) -> Result<Vec<(Scalar, Scalar)>, CliError> {
    split_list("box", text, ',')?
        .into_iter()
        .map(|axis| {
            let (a, b) = axis.split_once(':').ok_or_else(|| {
                CliError::Usage(format!("--box: expected 'lower:upper', got '{axis}'"))
            })?;
            Ok((Scalar::parse("box", a)?, Scalar::parse("box", b)?))
        })
        .collect()
}

/// `"x1,x2,…"`.
pub fn parse_vector(flag: &'static str, text: &str) -> Result<Vec<f64>, CliError> {
    split_list(flag, text, ',')?
        .into_iter()
        .map(|s| Scalar::parse(flag, s).map(|s| s.value))
        .collect()
}

/// Semicolon-separated columns of comma-separated entries.
pub fn parse_columns(flag: &'static str, text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    split_list(flag, text, ';')?
        .into_iter()
        .map(|col| parse_vector(flag, col))
        .collect()
}

pub fn parse_point2(flag: &'static str, text: &str) -> Result<[f64; 2], CliError> {
    match parse_vector(flag, text)?.as_slice() {
        &[x, y] => Ok([x, y]),
        other => Err(CliError::Usage(format!(
            "--{flag}: expected 2 coordinates, got {}",
            other.len()
        ))),
    }
}

pub fn parse_counts(flag: &'static str, text: &str) -> Result<Vec<usize>, CliError> {
    split_list(flag, text, ',')?
        .into_iter()
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("--{flag}: '{s}' is not a count")))
        })
        .collect()
}

pub fn parse_field(flag: &'static str, text: &str, n: usize) -> Result<Expr, CliError> {
    parse(text, n).map_err(|e| CliError::parse(flag, text, e))
}
