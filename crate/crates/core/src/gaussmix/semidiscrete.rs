use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gaussian::{GaussianMixture, GaussianTerm};
use super::stencil::{make_stencil, DifferenceStencil};
use crate::field::{QuadratureConfig, SpectralFunction};
use crate::frame::{Frame, Ramp, SUPPORT_B};
use crate::linalg::{self, Vec2};
use crate::sum::pairwise_c;
use crate::{Error, Result};

/// Weights below this magnitude are dropped.
pub const PRUNE: f64 = 1e-300;
/// Smallest admissible |Xi| on the band of a vanishing-moment input.
pub const SYMBOL_FLOOR: f64 = 1e-6;
/// Count constant `b_2` in `n(h) <= b_2 h^-4`.
pub const COUNT_CONSTANT: f64 = 36.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    /// Radius of the ball the generator band is rescaled into.
    pub r0: f64,
    /// Order J of the difference stencil.
    pub order: u32,
    /// Ramp used by the cutoff sigma.
    pub cutoff: Ramp,
    pub quad: QuadratureConfig,
    pub frame: Frame,
    /// Overrides the default `kappa = 2 B' / pi` with `B' = r0 / sqrt 2`.
    pub kappa: Option<f64>,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            r0: 1.0,
            order: 2,
            cutoff: Ramp::Exponential,
            quad: QuadratureConfig::default(),
            frame: Frame::default(),
            kappa: None,
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r0 > 0.0) || !self.r0.is_finite() {
            return Err(Error::InvalidParameter(format!("r0 must be positive, got {}", self.r0)));
        }
        if self.order == 0 {
            return Err(Error::InvalidParameter("stencil order must be >= 1".into()));
        }
        if let Some(k) = self.kappa {
            if !(k > 0.0) {
                return Err(Error::InvalidParameter(format!("kappa must be positive, got {k}")));
            }
        }
        Ok(())
    }

    /// Isotropic factor `s = sqrt 2 B / r0` taking the generator band into radius r0.
    pub fn dilation(&self) -> f64 {
        SQRT_2 * SUPPORT_B / self.r0
    }

    pub fn kappa(&self) -> f64 {
        self.kappa.unwrap_or(2.0 * (self.r0 / SQRT_2) / PI)
    }

    pub fn stencil(&self) -> Result<DifferenceStencil> {
        make_stencil(self.order, self.kappa())
    }

    pub fn sigma(&self, r: f64) -> f64 {
        if r <= 1.0 {
            1.0
        } else if r < 2.0 {
            self.cutoff.blend(2.0 - r)
        } else {
            0.0
        }
    }
}

/// `phi^(xi)` for `phi = exp(-|x|^2)`.
pub fn phi_hat(xi: Vec2) -> f64 {
    0.5 * (-(xi[0] * xi[0] + xi[1] * xi[1]) / 4.0).exp()
}

/// Lattice `h Z^2` restricted to `|h alpha| < 2`, row-major.
pub fn lattice_points(h: f64) -> Vec<Vec2> {
    let rad = 2.0 / (h * h);
    let n = rad.ceil() as i64;
    let mut out = Vec::new();
    for a in -n..=n {
        for b in -n..=n {
            if ((a * a + b * b) as f64).sqrt() < rad {
                out.push([h * a as f64, h * b as f64]);
            }
        }
    }
    out
}

struct SampleGrid {
    axes: (Vec2, Vec2),
    u: Vec<f64>,
    v: Vec<f64>,
    values: Vec<Complex64>,
}

/// `(2 pi)^-1 \int F^(xi) / (phi^(xi) D(xi)) e^{i alpha.xi} dxi` at each point, where `D`
/// is an optional extra divisor. Returns the samples and the smallest |D| seen on the band.
fn deconvolve_with(
    f: &SpectralFunction,
    points: &[Vec2],
    q: &QuadratureConfig,
    divisor: Option<&(dyn Fn(Vec2) -> f64 + Sync)>,
) -> Result<(Vec<Complex64>, f64)> {
    if !f.is_band_limited() {
        return Err(Error::UnboundedBand);
    }
    let reach = points.iter().map(|&p| linalg::norm(p)).fold(0.0, f64::max);
    let mut grids = Vec::new();
    let mut min_div = f64::INFINITY;
    for (w, atom) in &f.terms {
        let c = linalg::norm(atom.center());
        for rect in atom.regions(q.gaussian_tol) {
            let (nx, ny) = q.cells_axes(&rect, reach + c, reach + c, f64::INFINITY)?;
            let dx = rect.width() / nx as f64;
            let dy = rect.height() / ny as f64;
            let u: Vec<f64> = (0..nx).map(|i| rect.x[0] + (i as f64 + 0.5) * dx).collect();
            let v: Vec<f64> = (0..ny).map(|k| rect.y[0] + (k as f64 + 0.5) * dy).collect();
            let weight = dx * dy / (2.0 * PI);
            let mut values = Vec::with_capacity(nx * ny);
            for &a in &u {
                for &b in &v {
                    let xi = rect.to_global([a, b]);
                    let val = atom.ft(&f.frame, xi);
                    if val.norm_sqr() == 0.0 {
                        values.push(Complex64::new(0.0, 0.0));
                        continue;
                    }
                    let mut d = phi_hat(xi);
                    if let Some(div) = divisor {
                        let s = div(xi);
                        min_div = min_div.min(s.abs());
                        d *= s;
                    }
                    values.push(w * val * (weight / d));
                }
            }
            grids.push(SampleGrid {
                axes: rect.axes(),
                u,
                v,
                values,
            });
        }
    }
    let out = points
        .par_iter()
        .map(|&alpha| {
            let parts: Vec<Complex64> = grids
                .iter()
                .map(|g| {
                    let a1 = linalg::dot(alpha, g.axes.0);
                    let a2 = linalg::dot(alpha, g.axes.1);
                    let ev: Vec<Complex64> =
                        g.v.iter().map(|&b| Complex64::from_polar(1.0, a2 * b)).collect();
                    let rows: Vec<Complex64> = g
                        .u
                        .iter()
                        .enumerate()
                        .map(|(i, &a)| {
                            let row = &g.values[i * g.v.len()..(i + 1) * g.v.len()];
                            let mut s = Complex64::new(0.0, 0.0);
                            for (x, e) in row.iter().zip(&ev) {
                                s += x * e;
                            }
                            s * Complex64::from_polar(1.0, a1 * a)
                        })
                        .collect();
                    pairwise_c(&rows)
                })
                .collect();
            pairwise_c(&parts)
        })
        .collect();
    Ok((out, min_div))
}

/// Deconvolved samples `f_F(alpha)`; real for real `F`.
pub fn deconvolve_samples(f: &SpectralFunction, points: &[Vec2], q: &QuadratureConfig) -> Result<Vec<f64>> {
    Ok(deconvolve_with(f, points, q, None)?.0.into_iter().map(|z| z.re).collect())
}

/// Same as [`deconvolve_samples`] but keeping the imaginary parts.
pub fn deconvolve_samples_complex(
    f: &SpectralFunction,
    points: &[Vec2],
    q: &QuadratureConfig,
) -> Result<Vec<Complex64>> {
    Ok(deconvolve_with(f, points, q, None)?.0)
}

/// Lattice weights `(2 pi)^-1 h^2 sigma(h alpha) f_F(alpha)` before pruning.
fn scheme_weights(
    f: &SpectralFunction,
    h: f64,
    cfg: &SchemeConfig,
    divisor: Option<&(dyn Fn(Vec2) -> f64 + Sync)>,
) -> Result<(Vec<Vec2>, Vec<Complex64>, f64)> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("spacing must be positive, got {h}")));
    }
    let points = lattice_points(h);
    if f.terms.is_empty() {
        return Ok((Vec::new(), Vec::new(), f64::INFINITY));
    }
    let (samples, min_div) = deconvolve_with(f, &points, &cfg.quad, divisor)?;
    let weights = points
        .iter()
        .zip(&samples)
        .map(|(p, s)| s * (h * h / (2.0 * PI) * cfg.sigma(h * linalg::norm(*p))))
        .collect();
    Ok((points, weights, min_div))
}

/// Truncated semi-discrete scheme: one standard Gaussian per lattice point.
pub fn truncated_scheme(f: &SpectralFunction, h: f64, cfg: &SchemeConfig) -> Result<GaussianMixture> {
    cfg.validate()?;
    let (points, weights, _) = scheme_weights(f, h, cfg, None)?;
    let terms = points
        .into_iter()
        .zip(weights)
        .filter(|(_, w)| w.re.abs() >= PRUNE)
        .map(|(p, w)| GaussianTerm {
            weight: w.re,
            map: linalg::IDENTITY,
            center: p,
        })
        .collect();
    Ok(GaussianMixture { terms })
}

/// Vanishing-moment scheme: the truncated scheme of `F0 = F / Xi` followed by the stencil.
pub fn vm_scheme(f: &SpectralFunction, h: f64, cfg: &SchemeConfig) -> Result<GaussianMixture> {
    cfg.validate()?;
    let stencil = cfg.stencil()?;
    let band_min = symbol_floor_on_band(f, &stencil, cfg.quad.gaussian_tol);
    if band_min < SYMBOL_FLOOR {
        return Err(Error::SymbolTooSmall(band_min));
    }
    let div = |xi: Vec2| stencil.symbol_exact(xi[0]);
    let (points, weights, min_div) = scheme_weights(f, h, cfg, Some(&div))?;
    if min_div < SYMBOL_FLOOR {
        return Err(Error::SymbolTooSmall(min_div));
    }
    let mut terms = Vec::with_capacity(points.len() * stencil.coefficients.len());
    for (p, w) in points.iter().zip(&weights) {
        for (c, a) in stencil.coefficients.iter().zip(&stencil.offsets) {
            let weight = (c * w).re;
            if weight.abs() < PRUNE {
                continue;
            }
            // f(. + a) moves the center to alpha - a e1
            terms.push(GaussianTerm {
                weight,
                map: linalg::IDENTITY,
                center: [p[0] - a, p[1]],
            });
        }
    }
    Ok(GaussianMixture { terms })
}

/// Smallest `|sin(xi1/kappa)|^J` over the `xi1` range of the band boxes of `f`.
fn symbol_floor_on_band(f: &SpectralFunction, stencil: &DifferenceStencil, tol: f64) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for rect in f.band(tol) {
        let xs = rect.corners().map(|c| c[0]);
        let a = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let b = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        lo = lo.min(if a <= 0.0 && b >= 0.0 { 0.0 } else { a.abs().min(b.abs()) });
        hi = hi.max(a.abs().max(b.abs()));
    }
    if lo > hi {
        return f64::INFINITY;
    }
    let (u, v) = (lo / stencil.kappa, hi / stencil.kappa);
    // a zero of sin inside [u, v]
    if (v / PI).floor() >= (u / PI).ceil() {
        return 0.0;
    }
    let m = u.sin().abs().min(v.sin().abs());
    m.powi(stencil.order as i32)
}

/// Spacing for a term budget: `b_2 h^-4 = M`, or `M / (J+1)` when the stencil is used.
pub fn budget_to_h(m: usize, j: u32, cfg: &SchemeConfig) -> Result<f64> {
    let taps = cfg.order as usize + 1;
    let (min, share) = if j >= 4 { (taps, m as f64 / taps as f64) } else { (1, m as f64) };
    if m < min {
        return Err(Error::BudgetTooSmall { m, min, j });
    }
    Ok((COUNT_CONSTANT / share).powf(0.25))
}
