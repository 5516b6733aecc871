//! Anisotropic Gaussian-mixture approximation of functions with sparse
//! curvelet expansions.
//!
//! The crate evaluates a curvelet tight frame analytically in frequency,
//! approximates each curvelet by a short combination of anisotropic
//! Gaussians, distributes a global term budget over the largest
//! coefficients, and audits the stability estimates that make the
//! individual errors summable.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod budget;
mod error;
pub mod field;
pub mod frame;
pub mod gaussmix;
pub mod linalg;
pub mod scheme;
pub mod sum;

pub use error::{Error, Result};
