use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use super::gaussian::{prepared_ft, GaussianMixture, GaussianTerm, PreparedTerm};
use super::semidiscrete::{budget_to_h, truncated_scheme, vm_scheme, SchemeConfig};
use crate::field::{Atom, SpectralFunction};
use crate::frame::{apply_unitary, CurveletIndex};
use crate::linalg::{self, Vec2};
use crate::Result;

/// Scale from which the vanishing-moment scheme is used.
pub const VM_SCALE: u32 = 4;

/// Gaussian approximant of one generator together with the data needed to
/// evaluate its error.
#[derive(Clone, Debug)]
pub struct GeneratorApprox {
    pub j: u32,
    pub budget: usize,
    pub h: f64,
    /// Normalization factor `s`; normalized coordinates are `xi' = xi / s`.
    pub dilation: f64,
    pub mixture: GaussianMixture,
    frame: crate::frame::Frame,
    prepared: Vec<PreparedTerm>,
}

impl GeneratorApprox {
    pub fn build(j: u32, m: usize, cfg: &SchemeConfig) -> Result<GeneratorApprox> {
        let h = budget_to_h(m, j, cfg)?;
        let mut g = GeneratorApprox::at_spacing(j, h, cfg)?;
        g.budget = m;
        debug_assert!(g.mixture.len() <= m);
        Ok(g)
    }

    /// Approximant on the lattice of spacing `h`; `budget` is set to the term count.
    pub fn at_spacing(j: u32, h: f64, cfg: &SchemeConfig) -> Result<GeneratorApprox> {
        cfg.validate()?;
        let s = cfg.dilation();
        let target = SpectralFunction::single(cfg.frame, Atom::Generator { j, dilation: s });
        let normalized = if j >= VM_SCALE {
            vm_scheme(&target, h, cfg)?
        } else {
            truncated_scheme(&target, h, cfg)?
        };
        // the normalized target has transform gamma^(s xi); s^2 G(s x) has transform G^(xi / s)
        let mixture = GaussianMixture {
            terms: normalized
                .terms
                .iter()
                .map(|t| GaussianTerm {
                    weight: t.weight * s * s,
                    map: linalg::scaled(&t.map, s),
                    center: [t.center[0] / s, t.center[1] / s],
                })
                .collect(),
        };
        let prepared = mixture.prepared();
        Ok(GeneratorApprox {
            j,
            budget: mixture.len(),
            h,
            dilation: s,
            mixture,
            frame: cfg.frame,
            prepared,
        })
    }

    /// Error transform `gamma^(xi) - G^(xi)` at generator coordinates `xi`.
    pub fn error_ft(&self, xi: Vec2) -> Complex64 {
        Complex64::new(self.frame.generator_ft(self.j, xi), 0.0) - prepared_ft(&self.prepared, xi)
    }

    /// Error transform at normalized coordinates `xi' = xi / s`.
    pub fn error_ft_normalized(&self, xi: Vec2) -> Complex64 {
        self.error_ft([xi[0] * self.dilation, xi[1] * self.dilation])
    }

    /// `|E^(xi')|` divided by `min(|xi1'|,1)^2 (1+|xi'|)^-3` for j >= 4,
    /// multiplied by `(1+|xi'|)^3` otherwise.
    pub fn weighted_error(&self, xi: Vec2) -> f64 {
        let e = self.error_ft_normalized(xi).norm();
        let decay = (1.0 + linalg::norm(xi)).powi(3);
        if self.j < VM_SCALE {
            return e * decay;
        }
        if xi[0] == 0.0 {
            if e == 0.0 {
                return 0.0;
            }
            // quadratic-ratio limit from a small offset
            let d = 1e-6;
            let ed = self.error_ft_normalized([d, xi[1]]).norm();
            return ed / (d * d) * decay;
        }
        let m = xi[0].abs().min(1.0);
        e * decay / (m * m)
    }

    /// Supremum of the weighted error over a deterministic grid of the box
    /// `[-extent, extent]^2` (normalized coordinates) plus `random` seeded points.
    pub fn weighted_error_sup(&self, extent: f64, grid: usize, random: usize, seed: u64) -> f64 {
        let mut sup: f64 = 0.0;
        for a in 0..grid {
            for b in 0..grid {
                let x = -extent + 2.0 * extent * (a as f64 + 0.5) / grid as f64;
                let y = -extent + 2.0 * extent * (b as f64 + 0.5) / grid as f64;
                sup = sup.max(self.weighted_error([x, y]));
            }
        }
        let mut rng = Pcg64::seed_from_u64(seed);
        for _ in 0..random {
            let x = rng.gen_range(-extent..extent);
            let y = rng.gen_range(-extent..extent);
            sup = sup.max(self.weighted_error([x, y]));
        }
        sup
    }
}

/// Gaussian approximant of the scale-j generator with at most `m` terms.
pub fn approximate_generator(j: u32, m: usize, cfg: &SchemeConfig) -> Result<GaussianMixture> {
    Ok(GeneratorApprox::build(j, m, cfg)?.mixture)
}

/// `U_gamma` applied to the generator approximant.
pub fn approximate_curvelet(index: &CurveletIndex, m: usize, cfg: &SchemeConfig) -> Result<GaussianMixture> {
    Ok(apply_unitary(index, &approximate_generator(index.j, m, cfg)?))
}

/// Weighted error of the `(j, M)` approximant at normalized coordinates `xi`.
pub fn generator_error_weighted(j: u32, m: usize, xi: Vec2, cfg: &SchemeConfig) -> Result<f64> {
    Ok(GeneratorApprox::build(j, m, cfg)?.weighted_error(xi))
}
