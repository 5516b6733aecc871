use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::geometry::{orientation_count, scale_geometry, ScaleGeometry};
use crate::linalg::{apply, rotation, Mat2, Vec2};
use crate::{Error, Result};

/// Curvelet index `(j, l, k)`; the translation is stored as integers on the
/// scale lattice and materialized as `(2 pi k1 / Lambda_j, 2 pi k2 / lambda_j)`.
///
/// Ordering is lexicographic in `(j, l, k1, k2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveletIndex {
    pub j: u32,
    pub l: u32,
    pub k: [i64; 2],
}

impl CurveletIndex {
    pub fn new(j: u32, l: u32, k: [i64; 2]) -> Result<CurveletIndex> {
        if l >= orientation_count(j) {
            return Err(Error::InvalidParameter(format!(
                "orientation {l} out of range for scale {j}"
            )));
        }
        Ok(CurveletIndex { j, l, k })
    }

    pub fn geometry(&self) -> ScaleGeometry {
        scale_geometry(self.j)
    }

    /// Rotation angle `pi l 2^-floor(j/2)`, in [0, pi).
    pub fn angle(&self) -> f64 {
        PI * self.l as f64 / orientation_count(self.j) as f64
    }

    pub fn rotation(&self) -> Mat2 {
        rotation(self.angle())
    }

    /// Translation in the rotated frame, `k` as a point of the lattice.
    pub fn translation(&self) -> Vec2 {
        let g = self.geometry();
        [
            2.0 * PI * self.k[0] as f64 / g.big_lambda,
            2.0 * PI * self.k[1] as f64 / g.lambda,
        ]
    }

    /// Spatial center `R k`.
    pub fn center(&self) -> Vec2 {
        apply(&self.rotation(), self.translation())
    }
}

impl fmt::Display for CurveletIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, ({}, {}))", self.j, self.l, self.k[0], self.k[1])
    }
}

/// An index together with its scale data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveletAtom {
    pub index: CurveletIndex,
    pub geometry: ScaleGeometry,
    pub angle: f64,
}

impl From<CurveletIndex> for CurveletAtom {
    fn from(index: CurveletIndex) -> Self {
        CurveletAtom {
            index,
            geometry: index.geometry(),
            angle: index.angle(),
        }
    }
}
