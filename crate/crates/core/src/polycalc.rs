//! Exact multivariate polynomials over ℚ.
//!
//! This is the ground-truth side of the numeric code: no floating point is
//! involved anywhere in the arithmetic. Terms are stored sparsely and are
//! printed in graded lexicographic order.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::expression::{BinOp, Expr, Func, Node};
use crate::geometry::VertexLabel;

/// Exponent tuple, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

/// Exact rational from a decimal literal such as `12`, `0.25`, `.5` or `1.5e-3`.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i64>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let numer: BigInt = digits.parse().ok()?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let pow = num_traits::pow(ten, scale.unsigned_abs().try_into().ok()?);
    Some(if scale >= 0 {
        BigRational::from_integer(numer * pow)
    } else {
        BigRational::new(numer, pow)
    })
}

/// Exact conversion of a finite float.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Self {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: BigRational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    /// `x_{axis+1}`.
    pub fn var(arity: usize, axis: usize) -> Self {
        assert!(axis < arity, "variable index out of range");
        let mut mono = vec![0; arity];
        mono[axis] = 1;
        let mut p = Self::zero(arity);
        p.add_term(mono, BigRational::one());
        p
    }

    /// Build from `(exponents, coefficient)` pairs; like terms are merged.
    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = Self::zero(arity);
        for (mono, c) in terms {
            if mono.len() != arity {
                return Err(Error::DimensionMismatch {
                    expected: arity,
                    found: mono.len(),
                });
            }
            p.add_term(mono, c);
        }
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &[u32]) -> BigRational {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// The value if this polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.iter().all(|&e| e == 0))
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    /// Highest power of `x_{axis+1}` appearing in any term.
    pub fn degree_in(&self, axis: usize) -> u32 {
        self.terms.keys().map(|m| m[axis]).max().unwrap_or(0)
    }

    fn add_term(&mut self, mono: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Polynomial) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = Polynomial::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mono = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(mono, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(self.arity, BigRational::one());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same arity");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same arity");
            }
        }
        acc
    }

    /// Exact value at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: point.len(),
            });
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Floating-point value, summed in term order.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        crate::summation::compensated_sum(self.terms.iter().map(|(m, c)| {
            m.iter()
                .zip(point)
                .fold(ratio_to_f64(c), |acc, (&e, &x)| acc * x.powi(e as i32))
        }))
    }

    /// `∂/∂x_{axis+1}`.
    pub fn partial(&self, axis: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m[axis];
            if e == 0 {
                continue;
            }
            let mut mono = m.clone();
            mono[axis] -= 1;
            out.add_term(mono, c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// `∂₁ ⋯ ∂ₙ p`, one derivative per axis.
    pub fn mixed_partial(&self) -> Polynomial {
        (0..self.arity).fold(self.clone(), |p, axis| p.partial(axis))
    }

    /// `x ↦ ∫_{a}^{x} p du` along one axis: each `c·xᵏ` becomes
    /// `c·(x^{k+1} − a^{k+1})/(k+1)`.
    pub fn integrate_axis(&self, axis: usize, from: &BigRational) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let k1 = m[axis] + 1;
            let coeff = c / BigRational::from_integer(BigInt::from(k1));
            let mut upper = m.clone();
            upper[axis] = k1;
            let mut lower = m.clone();
            lower[axis] = 0;
            let shift = num_traits::pow(from.clone(), k1 as usize);
            out.add_term(upper, coeff.clone());
            out.add_term(lower, -(coeff * shift));
        }
        out
    }

    /// The iterated-integral antiderivative based at `corner`:
    /// `F(x) = ∫_{aₙ}^{xₙ} ⋯ ∫_{a₁}^{x₁} p`.
    pub fn antiderivative(&self, corner: &[BigRational]) -> Result<Polynomial> {
        if corner.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: corner.len(),
            });
        }
        Ok(corner
            .iter()
            .enumerate()
            .fold(self.clone(), |p, (axis, a)| p.integrate_axis(axis, a)))
    }

    /// Exact alternating vertex sum of `self` over `∏ [lower, upper]`.
    pub fn vertex_sum(&self, lower: &[BigRational], upper: &[BigRational]) -> Result<BigRational> {
        check_box(self.arity, lower, upper)?;
        let mut total = BigRational::zero();
        for label in VertexLabel::all(self.arity)? {
            let point: Vec<BigRational> = (0..self.arity)
                .map(|j| {
                    if label.bit(j) {
                        upper[j].clone()
                    } else {
                        lower[j].clone()
                    }
                })
                .collect();
            let v = self.eval(&point)?;
            if label.sign() > 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        Ok(total)
    }

    /// `∑ over monomials of c · ∏ⱼ (bⱼ^{k+1} − aⱼ^{k+1})/(k+1)`.
    pub fn product_form_integral(
        &self,
        lower: &[BigRational],
        upper: &[BigRational],
    ) -> Result<BigRational> {
        check_box(self.arity, lower, upper)?;
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (j, &k) in m.iter().enumerate() {
                let k1 = k as usize + 1;
                let span =
                    num_traits::pow(upper[j].clone(), k1) - num_traits::pow(lower[j].clone(), k1);
                term *= span / BigRational::from_integer(BigInt::from(k1));
            }
            total += term;
        }
        Ok(total)
    }

    /// Exact integral over a box. The vertex sum of the antiderivative is
    /// returned after checking it against the per-monomial product form.
    pub fn box_integral(
        &self,
        lower: &[BigRational],
        upper: &[BigRational],
    ) -> Result<BigRational> {
        let antiderivative = self.antiderivative(lower)?;
        let by_vertices = antiderivative.vertex_sum(lower, upper)?;
        let by_products = self.product_form_integral(lower, upper)?;
        if by_vertices != by_products {
            return Err(Error::InconsistentOracle {
                vertex_sum: by_vertices.to_string(),
                product_form: by_products.to_string(),
            });
        }
        Ok(by_vertices)
    }

    /// Terms in graded lexicographic order (total degree descending, then
    /// exponents descending).
    pub fn graded_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        terms
    }
}

fn check_box(arity: usize, lower: &[BigRational], upper: &[BigRational]) -> Result<()> {
    for len in [lower.len(), upper.len()] {
        if len != arity {
            return Err(Error::DimensionMismatch {
                expected: arity,
                found: len,
            });
        }
    }
    for (j, (a, b)) in lower.iter().zip(upper).enumerate() {
        if a > b {
            return Err(Error::InvertedAxis {
                axis: j + 1,
                lower: ratio_to_f64(a),
                upper: ratio_to_f64(b),
            });
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.graded_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{}", j + 1, e)
                    }
                })
                .collect();
            let coeff = if magnitude.is_integer() {
                magnitude.to_string()
            } else {
                format!("({magnitude})")
            };
            if vars.is_empty() {
                f.write_str(&coeff)?;
            } else if magnitude.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Expand an expression into an exact polynomial of the same arity.
///
/// Accepted: literals, variables, `+ − ×`, division by a nonzero constant,
/// and powers with a constant integer exponent (negative exponents only on
/// nonzero constant bases).
pub fn poly_from_expr(e: &Expr) -> Result<Polynomial> {
    from_node(e.root(), e.arity())
}

fn non_poly(node: &Node, why: &str) -> Error {
    Error::NonPolynomial(format!("{why} in '{node}'"))
}

fn integer_exponent(exp: &Polynomial, node: &Node) -> Result<i64> {
    let k = exp
        .as_constant()
        .ok_or_else(|| non_poly(node, "non-constant exponent"))?;
    if !k.is_integer() {
        return Err(non_poly(node, "fractional exponent"));
    }
    k.to_integer()
        .to_i64()
        .filter(|k| k.unsigned_abs() <= u32::MAX as u64)
        .ok_or_else(|| non_poly(node, "exponent too large"))
}

fn power(base: Polynomial, exp: &Polynomial, node: &Node) -> Result<Polynomial> {
    let k = integer_exponent(exp, node)?;
    if k >= 0 {
        return Ok(base.pow(k as u32));
    }
    match base.as_constant() {
        Some(c) if !c.is_zero() => Ok(Polynomial::constant(
            base.arity,
            num_traits::pow(c.recip(), k.unsigned_abs() as usize),
        )),
        Some(_) => Err(non_poly(node, "zero to a negative power")),
        None => Err(non_poly(node, "negative power of a non-constant")),
    }
}

fn from_node(node: &Node, arity: usize) -> Result<Polynomial> {
    match node {
        Node::Number { text, .. } => parse_decimal(text)
            .map(|c| Polynomial::constant(arity, c))
            .ok_or_else(|| non_poly(node, "unreadable literal")),
        Node::Var(i) => Ok(Polynomial::var(arity, *i)),
        Node::Const(c) => Err(non_poly(node, &format!("irrational constant {}", c.name()))),
        Node::Neg(inner) => Ok(from_node(inner, arity)?.neg()),
        Node::Binary(op, a, b) => {
            let lhs = from_node(a, arity)?;
            let rhs = from_node(b, arity)?;
            match op {
                BinOp::Add => lhs.add(&rhs),
                BinOp::Sub => lhs.sub(&rhs),
                BinOp::Mul => lhs.mul(&rhs),
                BinOp::Div => match rhs.as_constant() {
                    Some(c) if !c.is_zero() => Ok(lhs.scale(&c.recip())),
                    Some(_) => Err(non_poly(node, "division by zero")),
                    None => Err(non_poly(node, "division by a non-constant")),
                },
                BinOp::Pow => power(lhs, &rhs, node),
            }
        }
        Node::Call(Func::Pow, args) => {
            let base = from_node(&args[0], arity)?;
            let exp = from_node(&args[1], arity)?;
            power(base, &exp, node)
        }
        Node::Call(func, _) => Err(non_poly(node, &format!("function {}", func.name()))),
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::expression::parse;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn qi(n: i64) -> BigRational {
        q(n, 1)
    }

    fn poly(text: &str, n: usize) -> Polynomial {
        poly_from_expr(&parse(text, n).unwrap()).unwrap()
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_decimal("0.25"), Some(q(1, 4)));
        assert_eq!(parse_decimal("0.1"), Some(q(1, 10)));
        assert_eq!(parse_decimal(".5"), Some(q(1, 2)));
        assert_eq!(parse_decimal("1.5e-3"), Some(q(3, 2000)));
        assert_eq!(parse_decimal("2E3"), Some(qi(2000)));
        assert_eq!(parse_decimal("7"), Some(qi(7)));
        assert_eq!(parse_decimal("."), None);
        assert_eq!(parse_decimal("1x"), None);
    }

    #[test]
    fn expansion_examples() {
        let p = poly("x1*x2", 2);
        assert_eq!(p, Polynomial::from_terms(2, [(vec![1, 1], qi(1))]).unwrap());

        let p = poly("(x1+x2)^2", 2);
        let want = Polynomial::from_terms(
            2,
            [
                (vec![2, 0], qi(1)),
                (vec![1, 1], qi(2)),
                (vec![0, 2], qi(1)),
            ],
        )
        .unwrap();
        assert_eq!(p, want);
        assert_eq!(p.to_string(), "x1^2 + 2*x1*x2 + x2^2");

        assert_eq!(poly("x1^2*x2^2/4", 2).to_string(), "(1/4)*x1^2*x2^2");
        assert_eq!(poly("x1 - x1", 2).to_string(), "0");
        assert_eq!(poly("2^-2 * x1", 1), poly("0.25*x1", 1));
        assert_eq!(poly("pow(x1, 3)", 1), poly("x1*x1*x1", 1));
    }

    #[test]
    fn rejects_non_polynomial_constructs() {
        for text in [
            "sin(x1)",
            "1/x1",
            "x1^0.5",
            "x1^x1",
            "pi*x1",
            "x1^-1",
            "1/(x1-x1)",
            "abs(x1)",
        ] {
            let e = parse(text, 1).unwrap();
            assert!(
                matches!(poly_from_expr(&e), Err(Error::NonPolynomial(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn exact_evaluation() {
        assert_eq!(poly("x1*x2", 2).eval(&[qi(2), qi(3)]).unwrap(), qi(6));
        assert_eq!(poly("1", 2).eval(&[q(7, 3), qi(-5)]).unwrap(), qi(1));
        assert_eq!(poly("x1^2*x2^2/4", 2).eval(&[qi(2), qi(1)]).unwrap(), qi(1));
        assert!(poly("x1", 1).eval(&[qi(1), qi(2)]).is_err());
    }

    #[test]
    fn antiderivative_examples() {
        let zero2 = [qi(0), qi(0)];
        assert_eq!(
            poly("1", 2).antiderivative(&zero2).unwrap(),
            poly("x1*x2", 2)
        );
        assert_eq!(
            poly("x1*x2", 2).antiderivative(&zero2).unwrap(),
            poly("x1^2*x2^2/4", 2)
        );
        assert_eq!(
            poly("1", 1).antiderivative(&[qi(2)]).unwrap(),
            poly("x1 - 2", 1)
        );
    }

    #[test]
    fn mixed_partial_examples() {
        assert_eq!(poly("x1*x2", 2).mixed_partial(), poly("1", 2));
        assert_eq!(poly("x1^2*x2^2/4", 2).mixed_partial(), poly("x1*x2", 2));
        assert!(poly("7", 2).mixed_partial().is_zero());
    }

    #[test]
    fn box_integral_examples() {
        let p = poly("1", 2);
        assert_eq!(
            p.box_integral(&[qi(0), qi(0)], &[qi(1), qi(1)]).unwrap(),
            qi(1)
        );
        let p = poly("x1*x2", 2);
        // (∫₀² x dx)(∫₀¹ y dy) = 2 · 1/2
        assert_eq!(
            p.box_integral(&[qi(0), qi(0)], &[qi(2), qi(1)]).unwrap(),
            qi(1)
        );
        assert_eq!(
            p.box_integral(&[qi(0), qi(0)], &[qi(1), qi(1)]).unwrap(),
            q(1, 4)
        );
        assert!(p.box_integral(&[qi(1), qi(0)], &[qi(0), qi(1)]).is_err());
    }

    fn arb_rational() -> impl Strategy<Value = BigRational> {
        (-20i64..=20, 1i64..=7).prop_map(|(n, d)| q(n, d))
    }

    fn arb_poly(arity: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(
            (prop::collection::vec(0..=max_deg, arity), arb_rational()),
            0..8,
        )
        .prop_map(move |terms| Polynomial::from_terms(arity, terms).unwrap())
    }

    fn arb_case() -> impl Strategy<Value = (Polynomial, Vec<BigRational>, Vec<BigRational>)> {
        (1usize..=4).prop_flat_map(|n| {
            (
                arb_poly(n, 5),
                prop::collection::vec(arb_rational(), n),
                prop::collection::vec((0i64..=10, 1i64..=4), n),
            )
                .prop_map(|(p, a, widths)| {
                    let b = a
                        .iter()
                        .zip(&widths)
                        .map(|(a, &(w, d))| a + q(w, d))
                        .collect();
                    (p, a, b)
                })
        })
    }

    proptest! {
        #[test]
        fn antiderivative_then_mixed_partial_round_trips((p, a, _) in arb_case()) {
            prop_assert_eq!(p.antiderivative(&a).unwrap().mixed_partial(), p);
        }

        #[test]
        fn antiderivative_vanishes_on_corner_faces((p, a, b) in arb_case(), axis in 0usize..4) {
            let axis = axis % p.arity();
            let f = p.antiderivative(&a).unwrap();
            let mut point = b.clone();
            point[axis] = a[axis].clone();
            prop_assert!(f.eval(&point).unwrap().is_zero());
        }

        #[test]
        fn vertex_sum_equals_product_form((p, a, b) in arb_case()) {
            let f = p.antiderivative(&a).unwrap();
            prop_assert_eq!(
                f.vertex_sum(&a, &b).unwrap(),
                p.product_form_integral(&a, &b).unwrap()
            );
        }

        #[test]
        fn terms_missing_a_variable_are_in_the_gauge_kernel(p in arb_poly(3, 4), axis in 0usize..3) {
            let terms: Vec<_> = p
                .terms()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m[axis] = 0;
                    (m, c.clone())
                })
                .collect();
            let c = Polynomial::from_terms(3, terms).unwrap();
            prop_assert!(c.mixed_partial().is_zero());
        }
    }
}
