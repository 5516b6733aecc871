//! Gaussian mixtures, deconvolution, the semi-discrete approximation
//! schemes and per-curvelet approximants.

mod gaussian;
mod generator;
mod semidiscrete;
mod stencil;

pub use gaussian::{
    gaussian_ft, gaussian_inner, prepared_ft, GaussianMixture, GaussianTerm, PreparedTerm,
};
pub use generator::{
    approximate_curvelet, approximate_generator, generator_error_weighted, GeneratorApprox,
    VM_SCALE,
};
pub use semidiscrete::{
    budget_to_h, deconvolve_samples, deconvolve_samples_complex, lattice_points, phi_hat,
    truncated_scheme, vm_scheme, SchemeConfig, COUNT_CONSTANT, PRUNE, SYMBOL_FLOOR,
};
pub use stencil::{make_stencil, DifferenceStencil};
