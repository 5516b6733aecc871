use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, add, det, inverse, mul, quad, sub, transpose, Mat2, Vec2};
use crate::sum::pairwise;
use crate::{Error, Result};

/// `weight * exp(-|L (x - x0)|^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianTerm {
    pub weight: f64,
    pub map: Mat2,
    pub center: Vec2,
}

impl GaussianTerm {
    pub fn new(weight: f64, map: Mat2, center: Vec2) -> Result<GaussianTerm> {
        let d = det(&map);
        if d == 0.0 || !d.is_finite() {
            return Err(Error::SingularMap(d));
        }
        Ok(GaussianTerm {
            weight,
            map,
            center,
        })
    }

    /// Standard Gaussian `exp(-|x|^2)`.
    pub fn standard() -> GaussianTerm {
        GaussianTerm {
            weight: 1.0,
            map: linalg::IDENTITY,
            center: [0.0, 0.0],
        }
    }

    /// `L^T L`.
    pub fn precision(&self) -> Mat2 {
        mul(&transpose(&self.map), &self.map)
    }

    pub fn value(&self, x: Vec2) -> f64 {
        let y = linalg::apply(&self.map, sub(x, self.center));
        self.weight * (-(y[0] * y[0] + y[1] * y[1])).exp()
    }

    pub fn prepare(&self) -> PreparedTerm {
        let li = inverse(&self.map).expect("map checked invertible");
        // |L^-T xi|^2 = xi^T (L^-1 L^-T) xi
        let q = mul(&li, &transpose(&li));
        PreparedTerm {
            amp: self.weight * 0.5 / det(&self.map).abs(),
            q: [[q[0][0] / 4.0, q[0][1] / 4.0], [q[1][0] / 4.0, q[1][1] / 4.0]],
            center: self.center,
        }
    }

    pub fn ft(&self, xi: Vec2) -> Complex64 {
        self.prepare().ft(xi)
    }

    /// Radius beyond which the transform is below `tol` times its peak.
    pub fn spectral_radius(&self, tol: f64) -> f64 {
        let (hi, _) = linalg::singular_values(&self.map);
        2.0 * (-tol.ln()).max(0.0).sqrt() * hi
    }

    /// Spatial radius around the center beyond which the term is below `tol` of its peak.
    pub fn spatial_radius(&self, tol: f64) -> f64 {
        let (_, lo) = linalg::singular_values(&self.map);
        (-tol.ln()).max(0.0).sqrt() / lo
    }
}

/// Transform data with the inverse map folded in.
#[derive(Clone, Copy, Debug)]
pub struct PreparedTerm {
    amp: f64,
    q: Mat2,
    center: Vec2,
}

impl PreparedTerm {
    #[inline]
    pub fn ft(&self, xi: Vec2) -> Complex64 {
        let e = quad(&self.q, xi);
        let mag = self.amp * (-e).exp();
        Complex64::from_polar(mag, -(self.center[0] * xi[0] + self.center[1] * xi[1]))
    }
}

/// Fourier transform of a single term.
pub fn gaussian_ft(term: &GaussianTerm, xi: Vec2) -> Complex64 {
    term.ft(xi)
}

/// `<a, b>` in L2 for two real Gaussian terms.
pub fn gaussian_inner(a: &GaussianTerm, b: &GaussianTerm) -> f64 {
    let pa = a.precision();
    let pb = b.precision();
    let s = add(&pa, &pb);
    let si = inverse(&s).expect("sum of positive definite forms");
    let m = mul(&pa, &mul(&si, &pb));
    let d = sub(a.center, b.center);
    a.weight * b.weight * PI / det(&s).sqrt() * (-quad(&m, d)).exp()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GaussianMixture {
    pub terms: Vec<GaussianTerm>,
}

impl GaussianMixture {
    pub fn new(terms: Vec<GaussianTerm>) -> GaussianMixture {
        GaussianMixture { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn prepared(&self) -> Vec<PreparedTerm> {
        self.terms.iter().map(|t| t.prepare()).collect()
    }

    pub fn ft(&self, xi: Vec2) -> Complex64 {
        self.terms.iter().map(|t| t.ft(xi)).sum()
    }

    pub fn value(&self, x: Vec2) -> f64 {
        self.terms.iter().map(|t| t.value(x)).sum()
    }

    pub fn scaled(&self, c: f64) -> GaussianMixture {
        GaussianMixture {
            terms: self
                .terms
                .iter()
                .map(|t| GaussianTerm {
                    weight: t.weight * c,
                    ..*t
                })
                .collect(),
        }
    }

    /// `<self, other>` by closed-form pair integrals.
    pub fn inner(&self, other: &GaussianMixture) -> f64 {
        let parts: Vec<f64> = self
            .terms
            .iter()
            .map(|a| {
                let row: Vec<f64> = other.terms.iter().map(|b| gaussian_inner(a, b)).collect();
                pairwise(&row)
            })
            .collect();
        pairwise(&parts)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).max(0.0).sqrt()
    }
}

/// Evaluate the transform of a prepared mixture.
#[inline]
pub fn prepared_ft(terms: &[PreparedTerm], xi: Vec2) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for t in terms {
        acc += t.ft(xi);
    }
    acc
}
