use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::frame::{generator_boxes, wedge_boxes, CurveletIndex, Frame, Rect};
use crate::gaussmix::GaussianTerm;
use crate::linalg::Vec2;

/// A single building block with a closed-form Fourier transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Atom {
    Curvelet(CurveletIndex),
    /// Scale-j generator evaluated at `dilation * xi`; dilation 1 is the generator itself.
    Generator { j: u32, dilation: f64 },
    Gaussian(GaussianTerm),
}

/// Hashable identity used to merge repeated atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum AtomKey {
    Curvelet(CurveletIndex),
    Generator(u32, u64),
    Gaussian([u64; 7]),
}

impl Atom {
    pub(crate) fn key(&self) -> AtomKey {
        match self {
            Atom::Curvelet(i) => AtomKey::Curvelet(*i),
            Atom::Generator { j, dilation } => AtomKey::Generator(*j, dilation.to_bits()),
            Atom::Gaussian(t) => AtomKey::Gaussian([
                t.weight.to_bits(),
                t.map[0][0].to_bits(),
                t.map[0][1].to_bits(),
                t.map[1][0].to_bits(),
                t.map[1][1].to_bits(),
                t.center[0].to_bits(),
                t.center[1].to_bits(),
            ]),
        }
    }

    pub fn ft(&self, frame: &Frame, xi: Vec2) -> Complex64 {
        match self {
            Atom::Curvelet(i) => frame.curvelet_ft(i, xi),
            Atom::Generator { j, dilation } => {
                Complex64::new(frame.generator_ft(*j, [xi[0] * dilation, xi[1] * dilation]), 0.0)
            }
            Atom::Gaussian(t) => t.ft(xi),
        }
    }

    /// Spatial center, i.e. the linear phase of the transform.
    pub fn center(&self) -> Vec2 {
        match self {
            Atom::Curvelet(i) => i.center(),
            Atom::Generator { .. } => [0.0, 0.0],
            Atom::Gaussian(t) => t.center,
        }
    }

    pub fn is_band_limited(&self) -> bool {
        !matches!(self, Atom::Gaussian(_))
    }

    /// Exact support boxes for band-limited atoms; an effective box at
    /// relative level `tol` for Gaussians.
    pub fn regions(&self, tol: f64) -> Vec<Rect> {
        match self {
            Atom::Curvelet(i) => wedge_boxes(i.j, i.angle()),
            Atom::Generator { j, dilation } => generator_boxes(*j)
                .into_iter()
                .map(|b| Rect {
                    angle: 0.0,
                    x: [b.x[0] / dilation, b.x[1] / dilation],
                    y: [b.y[0] / dilation, b.y[1] / dilation],
                })
                .collect(),
            Atom::Gaussian(t) => {
                let r = t.spectral_radius(tol);
                vec![Rect::axis([-r, r], [-r, r])]
            }
        }
    }

    /// Finest spectral feature of a Gaussian atom, used to bound the grid step.
    pub(crate) fn feature_scale(&self) -> f64 {
        match self {
            Atom::Gaussian(t) => {
                let (_, lo) = crate::linalg::singular_values(&t.map);
                2.0 * lo
            }
            _ => f64::INFINITY,
        }
    }
}
