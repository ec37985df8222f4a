//! Independent reference integrators: composite tensor-product
//! Gauss–Legendre cubature and seeded Monte Carlo.

mod gauss;
mod monte_carlo;

pub use gauss::{
    gauss_legendre_box, gauss_legendre_rule, gauss_legendre_split_rect, gauss_legendre_triangle,
    GaussRule, QuadratureConfig, DEFAULT_BUDGET,
};
pub use monte_carlo::{monte_carlo_affine, MonteCarloEstimate};
