//! Functions represented through closed-form Fourier transforms, with
//! quadrature-based norms, distances and curvelet coefficients.

mod atom;
mod coefficients;
mod quadrature;
mod spectral;

pub use atom::Atom;
pub use coefficients::{parseval_check, wedge_coefficients, ParsevalReport};
pub use quadrature::{integrate_rect, QuadratureConfig};
pub use spectral::{inner_product, l2_distance, l2_norm, pair_inner, SpectralFunction};
