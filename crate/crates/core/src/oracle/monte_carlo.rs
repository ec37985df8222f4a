use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::Parallelotope;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    /// Sample standard deviation over `√samples`.
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl MonteCarloEstimate {
    /// Distance from `exact` in standard errors; infinite when the standard
    /// error is zero and the values differ.
    pub fn sigmas_from(&self, exact: f64) -> f64 {
        let d = (self.estimate - exact).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Mean of `f(origin + T·u)·|det T|` over `samples` uniform points `u` in
/// the unit box. `edges` are the columns of `T`.
///
/// The stream is ChaCha8 seeded from `seed`, which is value-stable across
/// platforms, and the running mean/variance use Welford's update in sample
/// order, so a fixed `(seed, samples)` gives a bitwise-identical estimate.
pub fn monte_carlo_affine(
    f: &ScalarField,
    origin: &[f64],
    edges: &[Vec<f64>],
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples < 2 {
        return Err(Error::InvalidConfig(format!(
            "Monte Carlo needs at least 2 samples, got {samples}"
        )));
    }
    let phi = Parallelotope::new(origin.to_vec(), edges.to_vec())?;
    let n = phi.dim();
    if f.arity() != n {
        return Err(Error::DimensionMismatch {
            expected: f.arity(),
            found: n,
        });
    }
    let jacobian = phi.det().abs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = vec![0.0; n];
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 1..=samples {
        for x in u.iter_mut() {
            *x = rng.random::<f64>();
        }
        let v = f.eval(&phi.map(&u))? * jacobian;
        let delta = v - mean;
        mean += delta / k as f64;
        m2 += delta * (v - mean);
    }
    let variance = m2 / (samples - 1) as f64;
    Ok(MonteCarloEstimate {
        estimate: mean,
        std_error: (variance / samples as f64).sqrt(),
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
            .collect()
    }

    #[test]
    fn constant_integrand_is_exact() {
        let f = ScalarField::constant(2, 1.0);
        let est = monte_carlo_affine(&f, &[0.0, 0.0], &[vec![2.0, 0.0], vec![1.0, 1.0]], 1000, 7)
            .unwrap();
        let det = Parallelotope::new(vec![0.0, 0.0], vec![vec![2.0, 0.0], vec![1.0, 1.0]])
            .unwrap()
            .det()
            .abs();
        assert_eq!(est.estimate, det);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn mean_of_a_coordinate() {
        let f = ScalarField::builtin("x1", 2, |x| x[0]);
        let est = monte_carlo_affine(&f, &[0.0, 0.0], &identity(2), 1_000_000, 42).unwrap();
        assert!(est.sigmas_from(0.5) <= 4.0, "{est:?}");
        // uniform variance is 1/12
        let want = (1.0f64 / 12.0 / 1e6).sqrt();
        assert!((est.std_error / want - 1.0).abs() < 0.01);
    }

    #[test]
    fn same_seed_same_bits() {
        let f = ScalarField::builtin("x1*x2", 2, |x| x[0] * x[1]);
        let a = monte_carlo_affine(&f, &[0.0, 0.0], &identity(2), 10_000, 3).unwrap();
        let b = monte_carlo_affine(&f, &[0.0, 0.0], &identity(2), 10_000, 3).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        let c = monte_carlo_affine(&f, &[0.0, 0.0], &identity(2), 10_000, 4).unwrap();
        assert_ne!(a.estimate, c.estimate);
    }

    #[test]
    fn rejects_singular_maps_and_tiny_sample_counts() {
        let f = ScalarField::constant(2, 1.0);
        assert!(matches!(
            monte_carlo_affine(&f, &[0.0, 0.0], &[vec![1.0, 0.0], vec![2.0, 0.0]], 10, 1),
            Err(Error::SingularMatrix { .. })
        ));
        assert!(monte_carlo_affine(&f, &[0.0, 0.0], &identity(2), 1, 1).is_err());
    }
}
