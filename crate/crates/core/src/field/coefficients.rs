use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::quadrature::QuadratureConfig;
use super::spectral::{l2_norm, SpectralFunction};
use crate::frame::{orientation_count, scale_geometry, wedge_boxes, CurveletIndex, Rect};
use crate::linalg::norm;
use crate::sum::pairwise;
use crate::{Error, Result};

/// Outcome of a tight-frame check on a finite function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsevalReport {
    pub coefficient_energy: f64,
    pub norm_sq: f64,
    pub ratio: f64,
    /// Translation truncation actually applied, `min(R_k, grid Nyquist radius)`.
    pub effective_radius: f64,
    pub requested_radius: f64,
    pub scales: Vec<u32>,
    pub wedges: usize,
    pub coefficients: usize,
}

/// Coefficients `<f, gamma_{j,l,k}>` for all lattice points with `|k| <= radius`.
///
/// The samples of `f^ chi_j(R* .)` are periodized onto the fundamental cell
/// `[0, Lambda_j) x [0, lambda_j)` and transformed with one 2-D FFT, so every
/// translation comes out of the same grid. Returns the coefficients and the
/// radius actually covered by the grid.
pub fn wedge_coefficients(
    f: &SpectralFunction,
    j: u32,
    l: u32,
    q: &QuadratureConfig,
    radius: f64,
) -> Result<(Vec<(CurveletIndex, Complex64)>, f64)> {
    let index0 = CurveletIndex::new(j, l, [0, 0])?;
    let angle = index0.angle();
    let boxes = wedge_boxes(j, angle);
    let band = f.band(q.gaussian_tol);
    if !boxes.iter().any(|b| band.iter().any(|r| b.intersects(r))) {
        return Ok((Vec::new(), radius));
    }
    let g = scale_geometry(j);
    let reach = f
        .terms
        .iter()
        .map(|(_, a)| norm(a.center()))
        .fold(0.0, f64::max);
    let feature = f
        .terms
        .iter()
        .map(|(_, a)| a.feature_scale())
        .fold(f64::INFINITY, f64::min);
    let mut dx = f64::INFINITY;
    let mut dy = f64::INFINITY;
    for b in &boxes {
        let (nx, ny) = q.cells_axes(b, reach, reach, feature)?;
        dx = dx.min(b.width() / nx as f64);
        dy = dy.min(b.height() / ny as f64);
    }
    let p = even_ceil(g.big_lambda / dx);
    let qn = even_ceil(g.lambda / dy);
    if p.max(qn) > q.max_cells {
        return Err(Error::OscillationGuard {
            needed: p.max(qn),
            limit: q.max_cells,
        });
    }
    let dx = g.big_lambda / p as f64;
    let dy = g.lambda / qn as f64;

    let mut grid = vec![Complex64::new(0.0, 0.0); p * qn];
    let frame = f.frame;
    for b in &boxes {
        let local = Rect { angle, ..*b };
        let i0 = (local.x[0] / dx - 0.5).floor() as i64;
        let i1 = (local.x[1] / dx - 0.5).ceil() as i64;
        let k0 = (local.y[0] / dy - 0.5).floor() as i64;
        let k1 = (local.y[1] / dy - 0.5).ceil() as i64;
        for i in i0..=i1 {
            let u = (i as f64 + 0.5) * dx;
            if u < local.x[0] || u > local.x[1] {
                continue;
            }
            let row = i.rem_euclid(p as i64) as usize * qn;
            for k in k0..=k1 {
                let v = (k as f64 + 0.5) * dy;
                if v < local.y[0] || v > local.y[1] {
                    continue;
                }
                let chi = frame.chi_polar(j, u.hypot(v), v.atan2(u));
                if chi == 0.0 {
                    continue;
                }
                let xi = local.to_global([u, v]);
                let val = f.eval_ft(xi) * chi;
                grid[row + k.rem_euclid(qn as i64) as usize] += val;
            }
        }
    }

    fft2_inverse(&mut grid, p, qn);
    let scale = dx * dy / (g.big_lambda * g.lambda).sqrt();
    let nyquist = (PI / dx).min(PI / dy);
    let eff = radius.min(nyquist);
    let mut out = Vec::new();
    for a in 0..p {
        let k1 = if a < p / 2 { a as i64 } else { a as i64 - p as i64 };
        for b in 0..qn {
            let k2 = if b < qn / 2 { b as i64 } else { b as i64 - qn as i64 };
            let kr = [
                2.0 * PI * k1 as f64 / g.big_lambda,
                2.0 * PI * k2 as f64 / g.lambda,
            ];
            if norm(kr) > eff {
                continue;
            }
            // midpoint offset: samples sit at (i + 1/2) dx
            let shift = Complex64::from_polar(
                1.0,
                PI * (k1 as f64 / p as f64 + k2 as f64 / qn as f64),
            );
            out.push((
                CurveletIndex { j, l, k: [k1, k2] },
                grid[a * qn + b] * shift * scale,
            ));
        }
    }
    out.sort_by_key(|x| x.0);
    Ok((out, eff))
}

fn even_ceil(x: f64) -> usize {
    let n = x.ceil() as usize;
    n + (n % 2)
}

/// Unnormalized inverse DFT along both axes of a row-major `p x q` grid.
fn fft2_inverse(grid: &mut [Complex64], p: usize, q: usize) {
    let mut planner = FftPlanner::new();
    let rows = planner.plan_fft_inverse(q);
    for r in grid.chunks_mut(q) {
        rows.process(r);
    }
    let cols = planner.plan_fft_inverse(p);
    let mut col = vec![Complex64::new(0.0, 0.0); p];
    for c in 0..q {
        for r in 0..p {
            col[r] = grid[r * q + c];
        }
        cols.process(&mut col);
        for r in 0..p {
            grid[r * q + c] = col[r];
        }
    }
}

/// `sum |<f, gamma>|^2 / ||f||^2` over all wedges meeting the band of `f`
/// and translations within `radius`.
pub fn parseval_check(f: &SpectralFunction, q: &QuadratureConfig, radius: f64) -> Result<ParsevalReport> {
    let band = f.band(q.gaussian_tol);
    let rmax = band.iter().map(Rect::max_radius).fold(0.0, f64::max);
    let mut scales = Vec::new();
    let mut j = 0u32;
    while scale_geometry(j).inner_radius() < rmax {
        scales.push(j);
        j += 1;
    }
    let mut energies = Vec::new();
    let mut eff = radius;
    let mut wedges = 0;
    let mut count = 0;
    for &j in &scales {
        for l in 0..orientation_count(j) {
            let (coeffs, r) = wedge_coefficients(f, j, l, q, radius)?;
            if coeffs.is_empty() {
                continue;
            }
            wedges += 1;
            count += coeffs.len();
            eff = eff.min(r);
            let e: Vec<f64> = coeffs.iter().map(|(_, c)| c.norm_sqr()).collect();
            energies.push(pairwise(&e));
        }
    }
    let energy = pairwise(&energies);
    let n = l2_norm(f, q)?;
    let norm_sq = n * n;
    Ok(ParsevalReport {
        coefficient_energy: energy,
        norm_sq,
        ratio: if norm_sq > 0.0 { energy / norm_sq } else { f64::NAN },
        effective_radius: eff,
        requested_radius: radius,
        scales,
        wedges,
        coefficients: count,
    })
}
