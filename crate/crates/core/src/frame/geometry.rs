use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::linalg::{diag, Mat2};

/// Lower support constant of the generators in the first coordinate (j >= 4).
pub const SUPPORT_A: f64 = std::f64::consts::SQRT_2 * PI / 3.0;
/// Sup-norm radius of every generator band.
pub const SUPPORT_B: f64 = 16.0 * PI * PI / 3.0;

/// Per-scale derived quantities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleGeometry {
    pub j: u32,
    /// Frequency height of the wedge box.
    pub lambda: f64,
    /// Frequency width (lattice period along the wedge axis).
    pub big_lambda: f64,
    /// Inner abscissa of the wedge.
    pub t: f64,
    pub eps1: f64,
    pub eps2: f64,
    /// `2^j`
    pub d1: f64,
    /// `2^floor(j/2)`
    pub d2: f64,
}

pub fn half_scale(j: u32) -> u32 {
    j / 2
}

/// Number of orientations at scale j.
pub fn orientation_count(j: u32) -> u32 {
    if j < 2 {
        1
    } else {
        1u32 << half_scale(j)
    }
}

pub fn scale_geometry(j: u32) -> ScaleGeometry {
    let d1 = 2f64.powi(j as i32);
    let d2 = 2f64.powi(half_scale(j) as i32);
    let (big_lambda, lambda, t) = match j {
        0 => (16.0 * PI / 3.0, 16.0 * PI / 3.0, 0.0),
        1 => (32.0 * PI / 3.0, 32.0 * PI / 3.0, 0.0),
        _ => {
            let a = PI / d2;
            let lambda = 16.0 * PI / 3.0 * d1 * a.sin();
            let t = d1 * 2.0 * PI / 3.0 * a.cos();
            (2.0 * (8.0 * PI / 3.0 * d1 - t), lambda, t)
        }
    };
    ScaleGeometry {
        j,
        lambda,
        big_lambda,
        t,
        eps1: big_lambda / d1,
        eps2: lambda / d2,
        d1,
        d2,
    }
}

impl ScaleGeometry {
    pub fn dilation(&self) -> Mat2 {
        diag(self.d1, self.d2)
    }

    pub fn det_dilation(&self) -> f64 {
        self.d1 * self.d2
    }

    pub fn orientations(&self) -> u32 {
        orientation_count(self.j)
    }

    /// Outer radius of the wedge support.
    pub fn outer_radius(&self) -> f64 {
        match self.j {
            0 => 8.0 * PI / 3.0,
            _ => 8.0 * PI / 3.0 * self.d1,
        }
    }

    /// Inner radius of the wedge support (0 at the coarse scale).
    pub fn inner_radius(&self) -> f64 {
        match self.j {
            0 => 0.0,
            _ => 2.0 * PI / 3.0 * self.d1,
        }
    }
}
