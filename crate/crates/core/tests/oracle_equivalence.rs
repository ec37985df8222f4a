use ftc_core::ftc::{integrate_box, integrate_box_from_f, integrate_parallelotope};
use ftc_core::geometry::{Hypercuboid, Parallelotope};
use ftc_core::oracle::{gauss_legendre_box, monte_carlo_affine, QuadratureConfig};
use ftc_core::ScalarField;
use proptest::prelude::*;

fn integrand(kind: usize, n: usize) -> ScalarField {
    match kind {
        0 => ScalarField::builtin("poly", n, |x| {
            x.iter()
                .enumerate()
                .map(|(j, v)| v.powi(j as i32 + 1) + 0.5)
                .product()
        }),
        1 => ScalarField::builtin("trig", n, |x| {
            x.iter().map(|v| (v + 0.3).sin()).product::<f64>() + x[0].cos()
        }),
        2 => ScalarField::builtin("exp", n, |x| (x.iter().sum::<f64>() * 0.7).exp()),
        _ => ScalarField::builtin("mixed", n, |x| {
            x[0].exp() * x[x.len() - 1].cos() + x.iter().map(|v| v * v).sum::<f64>()
        }),
    }
}

fn case() -> impl Strategy<Value = (usize, Vec<(f64, f64)>)> {
    (0usize..4, 1usize..=4).prop_flat_map(|(kind, n)| {
        (
            Just(kind),
            prop::collection::vec((-1.5..1.5f64, 0.2..1.5f64), n),
        )
    })
}

fn to_box(axes: &[(f64, f64)]) -> Hypercuboid {
    Hypercuboid::new(
        axes.iter().map(|a| a.0).collect(),
        axes.iter().map(|a| a.0 + a.1).collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn vertex_sum_agrees_with_both_oracles((kind, axes) in case()) {
        let n = axes.len();
        let f = integrand(kind, n);
        let h = to_box(&axes);
        let (ours, reference) = if n < 4 {
            (QuadratureConfig::default(), QuadratureConfig::new(16, 3).unwrap())
        } else {
            (QuadratureConfig::new(8, 2).unwrap(), QuadratureConfig::new(10, 2).unwrap())
        };
        let v = integrate_box_from_f(&f, &h, &ours).unwrap().value;
        let g = gauss_legendre_box(&f, &h, &reference).unwrap();
        prop_assert!((v - g).abs() <= 1e-8 * g.abs(), "{v} vs {g}");

        let edges: Vec<Vec<f64>> = (0..n)
            .map(|j| (0..n).map(|i| if i == j { h.extent(j) } else { 0.0 }).collect())
            .collect();
        let mc = monte_carlo_affine(&f, h.lower(), &edges, 20_000, kind as u64 * 31 + n as u64).unwrap();
        prop_assert!(mc.sigmas_from(v) <= 4.0, "{v} vs {mc:?}");
    }

    #[test]
    fn skewed_parallelograms_match_monte_carlo(
        kind in 0usize..4,
        o in (-1.0..1.0f64, -1.0..1.0f64),
        e in ((0.3..1.5f64, -0.5..0.5f64), (-0.5..0.5f64, 0.3..1.5f64)),
    ) {
        let origin = vec![o.0, o.1];
        let edges = vec![vec![e.0.0, e.0.1], vec![e.1.0, e.1.1]];
        let phi = Parallelotope::new(origin.clone(), edges.clone()).unwrap();
        let f = integrand(kind, 2);
        let v = integrate_parallelotope(&f, &phi, &QuadratureConfig::default()).unwrap().value;
        let mc = monte_carlo_affine(&f, &origin, &edges, 40_000, 7).unwrap();
        prop_assert!(mc.sigmas_from(v) <= 4.0, "{v} vs {mc:?}");
    }
}

#[test]
fn closed_form_antiderivative_in_four_dimensions() {
    // F = ∏ sin(xⱼ) has mixed partial ∏ cos(xⱼ)
    let big_f = ScalarField::builtin("prod sin", 4, |x| x.iter().map(|v| v.sin()).product());
    let f = ScalarField::builtin("prod cos", 4, |x| x.iter().map(|v| v.cos()).product());
    let h = Hypercuboid::new(vec![-0.3, 0.1, 0.0, -1.0], vec![0.9, 1.2, 0.5, 0.4]).unwrap();
    let v = integrate_box(&big_f, &h).unwrap().value;
    let exact: f64 = (0..4)
        .map(|j| h.upper()[j].sin() - h.lower()[j].sin())
        .product();
    assert!((v - exact).abs() <= 1e-15 * exact.abs().max(1.0));
    let g = gauss_legendre_box(&f, &h, &QuadratureConfig::new(8, 1).unwrap()).unwrap();
    assert!((v - g).abs() <= 1e-12 * g.abs());
}
