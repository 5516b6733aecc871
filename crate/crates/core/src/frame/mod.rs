//! Curvelet tight frame evaluated analytically in frequency.
//!
//! Conventions: the Fourier transform is `(2 pi)^-1 \int f(x) e^{-i x.xi} dx`
//! (unitary in 2-D), rotations are counter-clockwise and `R*` is the
//! transpose of `R`.

mod geometry;
mod index;
mod rect;
mod windows;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use geometry::{
    half_scale, orientation_count, scale_geometry, ScaleGeometry, SUPPORT_A, SUPPORT_B,
};
pub use index::{CurveletAtom, CurveletIndex};
pub use rect::Rect;
pub use windows::{build_windows, Ramp, WindowSet};

use crate::gaussmix::{GaussianMixture, GaussianTerm};
use crate::linalg::{apply, inverse, mul, transpose, Vec2};
use crate::{Error, Result};

/// Wrap an angle into (-pi, pi].
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    } else if t <= -PI {
        t += 2.0 * PI;
    }
    t
}

/// The curvelet system built on a window set. Cheap to copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Frame {
    pub windows: WindowSet,
}

impl Frame {
    pub fn new(ramp: Ramp) -> Frame {
        Frame {
            windows: build_windows(ramp),
        }
    }

    /// `chi_j` at polar coordinates `(r, theta)`.
    pub fn chi_polar(&self, j: u32, r: f64, theta: f64) -> f64 {
        let ws = &self.windows;
        match j {
            0 => ws.w0(r),
            1 => ws.w(r / 2.0),
            _ => {
                let radial = ws.w(r / 2f64.powi(j as i32));
                if radial == 0.0 {
                    return 0.0;
                }
                let q = 2f64.powi(half_scale(j) as i32);
                let th = wrap_angle(theta);
                radial * (ws.nu(q * th) + ws.nu(q * wrap_angle(th - PI)))
            }
        }
    }

    pub fn chi(&self, j: u32, xi: Vec2) -> f64 {
        self.chi_polar(j, xi[0].hypot(xi[1]), xi[1].atan2(xi[0]))
    }

    /// `chi_j(R*_angle xi)`.
    pub fn chi_rotated(&self, j: u32, angle: f64, xi: Vec2) -> f64 {
        if j < 2 {
            return self.chi(j, xi);
        }
        self.chi_polar(j, xi[0].hypot(xi[1]), xi[1].atan2(xi[0]) - angle)
    }

    /// Squared partition `sum_{j <= j_max} sum_l chi_j(R*_{j,l} xi)^2`.
    pub fn pu_total(&self, xi: Vec2, j_max: u32) -> Result<f64> {
        let r = xi[0].hypot(xi[1]);
        let limit = 2.0 * PI / 3.0 * 2f64.powi(j_max as i32 + 1);
        if r >= limit {
            let mut needed = j_max;
            while r >= 2.0 * PI / 3.0 * 2f64.powi(needed as i32 + 1) {
                needed += 1;
            }
            return Err(Error::CutoffTooSmall { norm: r, needed });
        }
        let theta = xi[1].atan2(xi[0]);
        let mut total = 0.0;
        for j in 0..=j_max {
            let n = orientation_count(j);
            for l in 0..n {
                let angle = PI * l as f64 / n as f64;
                let c = self.chi_polar(j, r, theta - angle);
                total += c * c;
            }
        }
        Ok(total)
    }

    /// Fourier transform of the scale-j generator, `(eps1 eps2)^-1/2 chi_j(D_j xi)`.
    pub fn generator_ft(&self, j: u32, xi: Vec2) -> f64 {
        let g = scale_geometry(j);
        self.chi(j, [g.d1 * xi[0], g.d2 * xi[1]]) / (g.eps1 * g.eps2).sqrt()
    }

    /// Modulus of the curvelet transform, independent of the translation.
    pub fn curvelet_amplitude(&self, j: u32, angle: f64, xi: Vec2) -> f64 {
        let g = scale_geometry(j);
        self.chi_rotated(j, angle, xi) / (g.big_lambda * g.lambda).sqrt()
    }

    pub fn curvelet_ft(&self, index: &CurveletIndex, xi: Vec2) -> Complex64 {
        let amp = self.curvelet_amplitude(index.j, index.angle(), xi);
        if amp == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let c = index.center();
        Complex64::from_polar(amp, -(c[0] * xi[0] + c[1] * xi[1]))
    }

    /// `U_gamma` applied term by term.
    pub fn apply_unitary(&self, index: &CurveletIndex, m: &GaussianMixture) -> GaussianMixture {
        apply_unitary(index, m)
    }
}

/// `U_gamma`: each term `(w, L, x0)` becomes
/// `(w |D|^1/2, L D R*, R (k + D^-1 x0))`.
pub fn apply_unitary(index: &CurveletIndex, m: &GaussianMixture) -> GaussianMixture {
    let g = index.geometry();
    let d = g.dilation();
    let r = index.rotation();
    let dr = mul(&d, &transpose(&r));
    let dinv = inverse(&d).expect("dilation is invertible");
    let k = index.translation();
    let scale = g.det_dilation().sqrt();
    let terms = m
        .terms
        .iter()
        .map(|t| {
            let shifted = apply(&dinv, t.center);
            GaussianTerm {
                weight: t.weight * scale,
                map: mul(&t.map, &dr),
                center: apply(&r, [k[0] + shifted[0], k[1] + shifted[1]]),
            }
        })
        .collect();
    GaussianMixture { terms }
}

/// Lattice points of scale j within `radius`, as integer pairs in row-major order.
pub fn translation_grid(j: u32, radius: f64) -> Vec<[i64; 2]> {
    let g = scale_geometry(j);
    let s1 = 2.0 * PI / g.big_lambda;
    let s2 = 2.0 * PI / g.lambda;
    let n1 = (radius / s1).floor() as i64;
    let n2 = (radius / s2).floor() as i64;
    let mut out = Vec::new();
    for k1 in -n1..=n1 {
        for k2 in -n2..=n2 {
            let p = [k1 as f64 * s1, k2 as f64 * s2];
            if p[0].hypot(p[1]) <= radius {
                out.push([k1, k2]);
            }
        }
    }
    out
}

/// Boxes covering the wedge of scale j in coordinates rotated by `angle`.
pub fn wedge_boxes(j: u32, angle: f64) -> Vec<Rect> {
    let g = scale_geometry(j);
    let outer = g.outer_radius();
    if j < 4 {
        let angle = if j < 2 { 0.0 } else { angle };
        let hy = if j < 2 { outer } else { g.lambda / 2.0 };
        return vec![Rect {
            angle,
            x: [-outer, outer],
            y: [-hy, hy],
        }];
    }
    let hy = g.lambda / 2.0;
    vec![
        Rect {
            angle,
            x: [g.t, outer],
            y: [-hy, hy],
        },
        Rect {
            angle,
            x: [-outer, -g.t],
            y: [-hy, hy],
        },
    ]
}

/// Boxes covering the band of the scale-j generator.
pub fn generator_boxes(j: u32) -> Vec<Rect> {
    let g = scale_geometry(j);
    wedge_boxes(j, 0.0)
        .into_iter()
        .map(|b| Rect {
            angle: 0.0,
            x: [b.x[0] / g.d1, b.x[1] / g.d1],
            y: [b.y[0] / g.d2, b.y[1] / g.d2],
        })
        .collect()
}
