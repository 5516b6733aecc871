use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::frame::Rect;
use crate::linalg::{dot, Vec2};
use crate::sum::pairwise_c;
use crate::{Error, Result};

/// Midpoint-rule settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Minimum number of cells along each side of a support box.
    pub cells: usize,
    /// Minimum samples per period of the fastest phase factor.
    pub samples_per_period: f64,
    /// Per-side cell limit; exceeding it trips the oscillation guard.
    pub max_cells: usize,
    /// Relative level defining the effective band of Gaussian terms.
    pub gaussian_tol: f64,
    /// Explicit regions for direct frequency-side norms; must not overlap.
    pub regions: Option<Vec<Rect>>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            cells: 160,
            samples_per_period: 8.0,
            max_cells: 16384,
            gaussian_tol: 1e-14,
            regions: None,
        }
    }
}

impl QuadratureConfig {
    /// Same configuration with the grid step halved.
    pub fn refined(&self) -> QuadratureConfig {
        QuadratureConfig {
            cells: self.cells * 2,
            samples_per_period: self.samples_per_period * 2.0,
            ..self.clone()
        }
    }

    /// Cell counts for a box given the phase vector and the finest feature.
    pub fn cells_for(&self, rect: &Rect, phase: Vec2, feature: f64) -> Result<(usize, usize)> {
        let (e1, e2) = rect.axes();
        self.cells_axes(rect, dot(e1, phase), dot(e2, phase), feature)
    }

    /// Cell counts given the phase frequency along each local axis.
    pub fn cells_axes(&self, rect: &Rect, f1: f64, f2: f64, feature: f64) -> Result<(usize, usize)> {
        let per = |len: f64, freq: f64| -> Result<usize> {
            let by_phase = self.samples_per_period * freq.abs() * len / (2.0 * std::f64::consts::PI);
            let by_feature = if feature.is_finite() { 6.0 * len / feature } else { 0.0 };
            let n = (self.cells as f64).max(by_phase).max(by_feature).ceil() as usize;
            if n > self.max_cells {
                return Err(Error::OscillationGuard {
                    needed: n,
                    limit: self.max_cells,
                });
            }
            Ok(n)
        };
        Ok((per(rect.width(), f1)?, per(rect.height(), f2)?))
    }
}

fn tree<F: Fn(usize) -> Complex64>(lo: usize, hi: usize, f: &F) -> Complex64 {
    if hi - lo <= 16 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            s += f(i);
        }
        return s;
    }
    let mid = lo + (hi - lo) / 2;
    tree(lo, mid, f) + tree(mid, hi, f)
}

/// Composite midpoint rule over a rotated box. Rows are summed in parallel
/// and combined with a fixed tree, so the result does not depend on the
/// number of workers.
pub fn integrate_rect<F>(rect: &Rect, nx: usize, ny: usize, f: F) -> Complex64
where
    F: Fn(Vec2) -> Complex64 + Sync,
{
    let dx = rect.width() / nx as f64;
    let dy = rect.height() / ny as f64;
    let (e1, e2) = rect.axes();
    let rows: Vec<Complex64> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let u = rect.x[0] + (i as f64 + 0.5) * dx;
            let base = [e1[0] * u, e1[1] * u];
            tree(0, ny, &|k| {
                let v = rect.y[0] + (k as f64 + 0.5) * dy;
                f([base[0] + e2[0] * v, base[1] + e2[1] * v])
            })
        })
        .collect();
    pairwise_c(&rows) * (dx * dy)
}
