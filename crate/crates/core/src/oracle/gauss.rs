use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{Breakline, ScalarField};
use crate::geometry::Hypercuboid;
use crate::summation::NeumaierSum;

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 32;
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `(P_q(x), P_q'(x))` by the three-term recurrence.
fn legendre_with_derivative(q: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=q {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn compute_rule(q: usize) -> GaussRule {
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    for i in 0..q.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(q, x);
            let dx = p / dp;
            x -= dx;
            if p.abs() < 1e-15 || dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(q, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root
        nodes[q - 1 - i] = x;
        nodes[i] = -x;
        weights[q - 1 - i] = w;
        weights[i] = w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

/// Cached rule for `q` nodes, `2 ≤ q ≤ 32`.
pub fn gauss_legendre_rule(q: usize) -> Result<&'static GaussRule> {
    static RULES: OnceLock<Vec<GaussRule>> = OnceLock::new();
    if !(MIN_ORDER..=MAX_ORDER).contains(&q) {
        return Err(Error::InvalidConfig(format!(
            "quadrature order must be in [{MIN_ORDER}, {MAX_ORDER}], got {q}"
        )));
    }
    let rules = RULES.get_or_init(|| (MIN_ORDER..=MAX_ORDER).map(compute_rule).collect());
    Ok(&rules[q - MIN_ORDER])
}

/// Composite rule: `panels` equal panels per axis, `order` nodes each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureConfig {
    order: usize,
    panels: usize,
    budget: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            order: 12,
            panels: 4,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl QuadratureConfig {
    pub fn new(order: usize, panels: usize) -> Result<Self> {
        if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
            return Err(Error::InvalidConfig(format!(
                "quadrature order must be in [{MIN_ORDER}, {MAX_ORDER}], got {order}"
            )));
        }
        if panels == 0 {
            return Err(Error::InvalidConfig(
                "panel count must be at least 1".into(),
            ));
        }
        Ok(Self {
            order,
            panels,
            budget: DEFAULT_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn points_per_axis(&self) -> usize {
        self.order * self.panels
    }

    fn check_budget(&self, evaluations: f64) -> Result<()> {
        if evaluations > self.budget as f64 {
            return Err(Error::BudgetExceeded {
                evaluations,
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// Nodes and weights on `[a, b]`, ordered by (panel, node).
    fn axis_rule(&self, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let rule = gauss_legendre_rule(self.order)?;
        let width = (b - a) / self.panels as f64;
        let mut nodes = Vec::with_capacity(self.points_per_axis());
        let mut weights = Vec::with_capacity(self.points_per_axis());
        for p in 0..self.panels {
            let lo = a + width * p as f64;
            let half = 0.5 * width;
            let mid = lo + half;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Ok((nodes, weights))
    }
}

/// Composite tensor-product Gauss–Legendre integral of `f` over `h`.
///
/// Summation is lexicographic over (panel, node) per axis with axis 1
/// slowest, compensated. A degenerate box integrates to exactly `0.0`.
pub fn gauss_legendre_box(f: &ScalarField, h: &Hypercuboid, cfg: &QuadratureConfig) -> Result<f64> {
    let n = h.dim();
    if f.arity() != n {
        return Err(Error::DimensionMismatch {
            expected: f.arity(),
            found: n,
        });
    }
    let per_axis = cfg.points_per_axis();
    cfg.check_budget((per_axis as f64).powi(n as i32))?;
    if h.is_degenerate() {
        return Ok(0.0);
    }

    let rules: Vec<(Vec<f64>, Vec<f64>)> = (0..n)
        .map(|j| cfg.axis_rule(h.lower()[j], h.upper()[j]))
        .collect::<Result<_>>()?;

    let mut index = vec![0usize; n];
    let mut point: Vec<f64> = rules.iter().map(|(x, _)| x[0]).collect();
    // prefix[j] = product of weights on axes 0..j
    let mut prefix = vec![1.0; n + 1];
    for j in 0..n {
        prefix[j + 1] = prefix[j] * rules[j].1[0];
    }
    let mut acc = NeumaierSum::new();
    loop {
        acc.add(prefix[n] * f.eval(&point)?);

        let mut j = n;
        loop {
            if j == 0 {
                return Ok(acc.total());
            }
            j -= 1;
            index[j] += 1;
            if index[j] < per_axis {
                break;
            }
            index[j] = 0;
        }
        for k in j..n {
            point[k] = rules[k].0[index[k]];
            prefix[k + 1] = prefix[k] * rules[k].1[index[k]];
        }
    }
}

/// Collapsed (Duffy) Gauss–Legendre integral over the triangle `abc`:
/// `z = a + s(b − a) + s·t(c − b)` with Jacobian `s·|det(b − a, c − b)|`.
pub fn gauss_legendre_triangle(
    f: &ScalarField,
    tri: [[f64; 2]; 3],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if f.arity() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.arity(),
        });
    }
    let per_axis = cfg.points_per_axis() as f64;
    cfg.check_budget(per_axis * per_axis)?;
    let [a, b, c] = tri;
    let e1 = [b[0] - a[0], b[1] - a[1]];
    let e2 = [c[0] - b[0], c[1] - b[1]];
    let det = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
    if det == 0.0 {
        return Ok(0.0);
    }
    let (s_nodes, s_weights) = cfg.axis_rule(0.0, 1.0)?;
    let mut acc = NeumaierSum::new();
    let mut z = [0.0; 2];
    for (&s, &ws) in s_nodes.iter().zip(&s_weights) {
        for (&t, &wt) in s_nodes.iter().zip(&s_weights) {
            let st = s * t;
            z[0] = a[0] + s * e1[0] + st * e2[0];
            z[1] = a[1] + s * e1[1] + st * e2[1];
            acc.add(ws * wt * s * f.eval(&z)?);
        }
    }
    Ok(det * acc.total())
}

/// Keep the part of a convex polygon where `sign · line.side(z) ≥ 0`.
fn clip(polygon: &[[f64; 2]], line: &Breakline, sign: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(polygon.len() + 1);
    for i in 0..polygon.len() {
        let cur = polygon[i];
        let next = polygon[(i + 1) % polygon.len()];
        let dc = sign * line.side(&cur);
        let dn = sign * line.side(&next);
        if dc >= 0.0 {
            out.push(cur);
        }
        if (dc > 0.0 && dn < 0.0) || (dc < 0.0 && dn > 0.0) {
            let t = dc / (dc - dn);
            out.push([
                cur[0] + t * (next[0] - cur[0]),
                cur[1] + t * (next[1] - cur[1]),
            ]);
        }
    }
    out
}

/// Integral over the rectangle `[lower, upper]` of a field that is smooth on
/// each side of `line` but only continuous across it. Each side is clipped,
/// fan-triangulated and integrated with [`gauss_legendre_triangle`].
pub fn gauss_legendre_split_rect(
    f: &ScalarField,
    lower: [f64; 2],
    upper: [f64; 2],
    line: &Breakline,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if lower[0] > upper[0] || lower[1] > upper[1] {
        return Err(Error::InvertedAxis {
            axis: if lower[0] > upper[0] { 1 } else { 2 },
            lower: lower[0].max(lower[1]),
            upper: upper[0].min(upper[1]),
        });
    }
    let rect = [lower, [upper[0], lower[1]], upper, [lower[0], upper[1]]];
    let mut acc = NeumaierSum::new();
    for sign in [-1.0, 1.0] {
        let piece = clip(&rect, line, sign);
        for k in 1..piece.len().saturating_sub(1) {
            acc.add(gauss_legendre_triangle(
                f,
                [piece[0], piece[k], piece[k + 1]],
                cfg,
            )?);
        }
    }
    Ok(acc.total())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_have_unit_half_weight_sum_and_satisfy_the_root_condition() {
        for q in MIN_ORDER..=MAX_ORDER {
            let rule = gauss_legendre_rule(q).unwrap();
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "q = {q}: {total}");
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
            for &x in &rule.nodes {
                let (p, _) = legendre_with_derivative(q, x);
                assert!(p.abs() < 1e-13, "q = {q}, P(x) = {p}");
            }
        }
    }

    #[test]
    fn two_point_rule_matches_closed_form() {
        let rule = gauss_legendre_rule(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        // within two ulps of the closed form
        assert!((rule.nodes[1] - x).abs() <= 2.0 * f64::EPSILON * x);
        assert!((rule.nodes[0] + x).abs() <= 2.0 * f64::EPSILON * x);
        assert!(rule.weights.iter().all(|w| (w - 1.0).abs() < 1e-15));
    }

    #[test]
    fn order_bounds() {
        assert!(gauss_legendre_rule(1).is_err());
        assert!(gauss_legendre_rule(33).is_err());
        assert!(QuadratureConfig::new(12, 0).is_err());
    }

    #[test]
    fn constant_integrand_gives_volume() {
        let h = Hypercuboid::new(vec![-1.0, 0.5, 2.0], vec![2.0, 1.25, 3.5]).unwrap();
        let f = ScalarField::constant(3, 2.5);
        let v = gauss_legendre_box(&f, &h, &QuadratureConfig::default()).unwrap();
        let want = 2.5 * h.volume();
        assert!((v - want).abs() <= 1e-14 * want);
    }

    #[test]
    fn two_point_rule_is_exact_for_cubics() {
        let h = Hypercuboid::new(vec![0.0], vec![1.0]).unwrap();
        let cfg = QuadratureConfig::new(2, 1).unwrap();
        let f = ScalarField::builtin("x1", 1, |x| x[0]);
        assert!((gauss_legendre_box(&f, &h, &cfg).unwrap() - 0.5).abs() < 1e-15);
        let f = ScalarField::builtin("x1^3", 1, |x| x[0].powi(3));
        assert!((gauss_legendre_box(&f, &h, &cfg).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn sine_over_half_period() {
        // ∫₀^π sin = (1 − cos π) − (1 − cos 0) = 2
        let h = Hypercuboid::new(vec![0.0], vec![PI]).unwrap();
        let cfg = QuadratureConfig::new(8, 4).unwrap();
        let f = ScalarField::builtin("sin", 1, |x| x[0].sin());
        assert!((gauss_legendre_box(&f, &h, &cfg).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn budget_is_enforced() {
        let h = Hypercuboid::unit(4).unwrap();
        let cfg = QuadratureConfig::new(10, 1).unwrap().with_budget(9_999);
        let f = ScalarField::constant(4, 1.0);
        assert!(matches!(
            gauss_legendre_box(&f, &h, &cfg),
            Err(Error::BudgetExceeded { .. })
        ));
        let cfg = cfg.with_budget(10_000);
        assert!(gauss_legendre_box(&f, &h, &cfg).is_ok());
    }

    #[test]
    fn degenerate_box_is_exactly_zero() {
        let h = Hypercuboid::new(vec![0.0, 0.3], vec![1.0, 0.3]).unwrap();
        let f = ScalarField::builtin("exp", 2, |x| (x[0] + x[1]).exp());
        assert_eq!(
            gauss_legendre_box(&f, &h, &QuadratureConfig::default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn triangle_rule_is_exact_for_low_degree() {
        // ∫ over the unit right triangle of x + y = 1/3, of x²y = 1/60
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let cfg = QuadratureConfig::new(6, 1).unwrap();
        let f = ScalarField::builtin("x+y", 2, |x| x[0] + x[1]);
        assert!((gauss_legendre_triangle(&f, tri, &cfg).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let f = ScalarField::builtin("x^2 y", 2, |x| x[0] * x[0] * x[1]);
        assert!((gauss_legendre_triangle(&f, tri, &cfg).unwrap() - 1.0 / 60.0).abs() < 1e-16);
    }

    #[test]
    fn split_rectangle_handles_a_kink_exactly() {
        // tent on the unit square, peak 1 along u + v = 1: integral 2/3
        let line = Breakline {
            normal: [1.0, 1.0],
            offset: 1.0,
        };
        let f = ScalarField::builtin("tent", 2, |x| {
            let s = x[0] + x[1];
            if s <= 1.0 {
                s
            } else {
                2.0 - s
            }
        });
        let cfg = QuadratureConfig::default();
        let v = gauss_legendre_split_rect(&f, [0.0, 0.0], [1.0, 1.0], &line, &cfg).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-14, "{v}");
        // a line missing the rectangle leaves a plain rectangle integral
        let far = Breakline {
            normal: [1.0, 0.0],
            offset: 5.0,
        };
        let v = gauss_legendre_split_rect(&f, [0.0, 0.0], [0.5, 0.25], &far, &cfg).unwrap();
        // tent = u + v there: ∫₀^½∫₀^¼ (u+v) = ¼·⅛ + ½·(1/32)
        assert!((v - (0.25 * 0.125 + 0.5 / 32.0)).abs() < 1e-15, "{v}");
    }
}
