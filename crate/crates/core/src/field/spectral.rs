use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::atom::Atom;
use super::quadrature::{integrate_rect, QuadratureConfig};
use crate::frame::{CurveletIndex, Frame, Rect};
use crate::gaussmix::{gaussian_inner, GaussianMixture};
use crate::linalg::{sub, Vec2};
use crate::sum::{pairwise, pairwise_c};
use crate::{Error, Result};

/// A finite combination of atoms, known through its Fourier transform.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectralFunction {
    pub frame: Frame,
    pub terms: Vec<(Complex64, Atom)>,
}

impl SpectralFunction {
    pub fn new(frame: Frame) -> SpectralFunction {
        SpectralFunction {
            frame,
            terms: Vec::new(),
        }
    }

    pub fn single(frame: Frame, atom: Atom) -> SpectralFunction {
        SpectralFunction {
            frame,
            terms: vec![(Complex64::new(1.0, 0.0), atom)],
        }
    }

    pub fn from_curvelets(frame: Frame, coeffs: &[(f64, CurveletIndex)]) -> SpectralFunction {
        SpectralFunction {
            frame,
            terms: coeffs
                .iter()
                .map(|&(w, i)| (Complex64::new(w, 0.0), Atom::Curvelet(i)))
                .collect(),
        }
    }

    pub fn from_mixture(frame: Frame, m: &GaussianMixture) -> SpectralFunction {
        SpectralFunction {
            frame,
            terms: m
                .terms
                .iter()
                .map(|t| (Complex64::new(1.0, 0.0), Atom::Gaussian(*t)))
                .collect(),
        }
    }

    pub fn push(&mut self, weight: Complex64, atom: Atom) {
        self.terms.push((weight, atom));
    }

    pub fn is_band_limited(&self) -> bool {
        self.terms.iter().all(|(_, a)| a.is_band_limited())
    }

    pub fn eval_ft(&self, xi: Vec2) -> Complex64 {
        self.terms
            .iter()
            .map(|(w, a)| w * a.ft(&self.frame, xi))
            .sum()
    }

    /// Union of the term supports (effective boxes for Gaussian terms).
    pub fn band(&self, tol: f64) -> Vec<Rect> {
        self.terms.iter().flat_map(|(_, a)| a.regions(tol)).collect()
    }

    /// `self - other`, with identical atoms merged so exact cancellation is exact.
    pub fn difference(&self, other: &SpectralFunction) -> SpectralFunction {
        let mut all = self.terms.clone();
        all.extend(other.terms.iter().map(|(w, a)| (-w, *a)));
        SpectralFunction {
            frame: self.frame,
            terms: merge(&all),
        }
    }

    /// Terms with identical atoms combined, zero weights dropped, first-seen order kept.
    pub fn merged(&self) -> SpectralFunction {
        SpectralFunction {
            frame: self.frame,
            terms: merge(&self.terms),
        }
    }
}

fn merge(terms: &[(Complex64, Atom)]) -> Vec<(Complex64, Atom)> {
    let mut slot: HashMap<_, usize> = HashMap::new();
    let mut out: Vec<(Complex64, Atom)> = Vec::new();
    for (w, a) in terms {
        match slot.get(&a.key()) {
            Some(&i) => out[i].0 += w,
            None => {
                slot.insert(a.key(), out.len());
                out.push((*w, *a));
            }
        }
    }
    out.retain(|(w, _)| *w != Complex64::new(0.0, 0.0));
    out
}

fn disjoint(a: &[Rect], b: &[Rect]) -> bool {
    a.iter().all(|x| b.iter().all(|y| !x.intersects(y)))
}

/// `<a, b> = \int a^ conj(b^)`.
pub fn pair_inner(frame: &Frame, a: &Atom, b: &Atom, q: &QuadratureConfig) -> Result<Complex64> {
    if let (Atom::Gaussian(ga), Atom::Gaussian(gb)) = (a, b) {
        return Ok(Complex64::new(gaussian_inner(ga, gb), 0.0));
    }
    let ra = a.regions(q.gaussian_tol);
    let rb = b.regions(q.gaussian_tol);
    if a.is_band_limited() && b.is_band_limited() && disjoint(&ra, &rb) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let area = |r: &[Rect]| r.iter().map(Rect::area).sum::<f64>();
    let regions = match (a.is_band_limited(), b.is_band_limited()) {
        (true, false) => ra,
        (false, true) => rb,
        _ => {
            if area(&ra) <= area(&rb) {
                ra
            } else {
                rb
            }
        }
    };
    let phase = sub(a.center(), b.center());
    let feature = a.feature_scale().min(b.feature_scale());
    let mut parts = Vec::with_capacity(regions.len());
    for rect in &regions {
        let (nx, ny) = q.cells_for(rect, phase, feature)?;
        parts.push(integrate_rect(rect, nx, ny, |xi| {
            a.ft(frame, xi) * b.ft(frame, xi).conj()
        }));
    }
    Ok(pairwise_c(&parts))
}

/// `sum_{a,b} c_a conj(c_b) <a, b>` by pairwise integrals.
fn gram_norm_sq(f: &SpectralFunction, q: &QuadratureConfig) -> Result<f64> {
    let terms = &f.terms;
    let rows: Vec<Result<f64>> = (0..terms.len())
        .into_par_iter()
        .map(|i| {
            let (ci, ai) = &terms[i];
            let mut row = Vec::with_capacity(terms.len() - i);
            for (cj, aj) in &terms[i..] {
                let g = pair_inner(&f.frame, ai, aj, q)?;
                row.push(g * ci * cj.conj());
            }
            let diag = row[0].re;
            let off: Vec<f64> = row[1..].iter().map(|z| 2.0 * z.re).collect();
            Ok(diag + pairwise(&off))
        })
        .collect();
    let rows: Vec<f64> = rows.into_iter().collect::<Result<_>>()?;
    Ok(pairwise(&rows))
}

/// Direct frequency-side quadrature of `|f^|^2` over the explicit regions of `q`.
fn direct_norm_sq(f: &SpectralFunction, regions: &[Rect], q: &QuadratureConfig) -> Result<f64> {
    for (_, a) in &f.terms {
        for b in a.regions(q.gaussian_tol) {
            if !regions.iter().any(|r| r.covers(&b)) {
                return Err(Error::UncoveredBand(format!("{b:?}")));
            }
        }
    }
    let reach = f
        .terms
        .iter()
        .map(|(_, a)| crate::linalg::norm(a.center()))
        .fold(0.0, f64::max);
    let feature = f
        .terms
        .iter()
        .map(|(_, a)| a.feature_scale())
        .fold(f64::INFINITY, f64::min);
    let mut parts = Vec::new();
    for rect in regions {
        // |f^|^2 oscillates with differences of centers, at most twice the reach
        let (n, m) = q.cells_axes(rect, 2.0 * reach, 2.0 * reach, feature)?;
        parts.push(integrate_rect(rect, n, m, |xi| {
            Complex64::new(f.eval_ft(xi).norm_sqr(), 0.0)
        }));
    }
    Ok(pairwise_c(&parts).re)
}

/// `||f||_2 = ||f^||_2`.
pub fn l2_norm(f: &SpectralFunction, q: &QuadratureConfig) -> Result<f64> {
    let m = f.merged();
    if m.terms.is_empty() {
        return Ok(0.0);
    }
    let sq = match &q.regions {
        Some(r) => direct_norm_sq(&m, r, q)?,
        None => gram_norm_sq(&m, q)?,
    };
    Ok(sq.max(0.0).sqrt())
}

pub fn l2_distance(f: &SpectralFunction, g: &SpectralFunction, q: &QuadratureConfig) -> Result<f64> {
    l2_norm(&f.difference(g), q)
}

/// `<f, gamma_index>`.
pub fn inner_product(
    f: &SpectralFunction,
    index: &CurveletIndex,
    q: &QuadratureConfig,
) -> Result<Complex64> {
    let target = Atom::Curvelet(*index);
    let mut parts = Vec::with_capacity(f.terms.len());
    for (w, a) in &f.terms {
        parts.push(w * pair_inner(&f.frame, a, &target, q)?);
    }
    Ok(pairwise_c(&parts))
}
