use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// J-fold symmetric difference along the first axis with symbol `sin(xi1/kappa)^J`.
///
/// Tap k shifts by `(2k - J)/kappa` under `f(. + a) -> e^{i a.xi} f^`. For odd
/// J the coefficients are purely imaginary, so they are stored as complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferenceStencil {
    pub order: u32,
    pub kappa: f64,
    pub coefficients: Vec<Complex64>,
    pub offsets: Vec<f64>,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn make_stencil(order: u32, kappa: f64) -> Result<DifferenceStencil> {
    if order == 0 || !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "stencil needs J >= 1 and kappa > 0 (J = {order}, kappa = {kappa})"
        )));
    }
    // sin(u)^J = (2i)^-J sum_k C(J,k) (-1)^(J-k) e^{i(2k-J)u}
    let lead = Complex64::new(0.0, 2.0).powi(-(order as i32));
    let coefficients = (0..=order)
        .map(|k| {
            let sign = if (order - k).is_multiple_of(2) { 1.0 } else { -1.0 };
            lead * binomial(order, k) * sign
        })
        .collect();
    let offsets = (0..=order)
        .map(|k| (2.0 * k as f64 - order as f64) / kappa)
        .collect();
    Ok(DifferenceStencil {
        order,
        kappa,
        coefficients,
        offsets,
    })
}

impl DifferenceStencil {
    /// `sum_k c_k e^{i a_k xi1}`.
    pub fn symbol(&self, xi1: f64) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&self.offsets)
            .map(|(c, a)| c * Complex64::from_polar(1.0, a * xi1))
            .sum()
    }

    /// Closed form `sin(xi1/kappa)^J`.
    pub fn symbol_exact(&self, xi1: f64) -> f64 {
        (xi1 / self.kappa).sin().powi(self.order as i32)
    }
}
