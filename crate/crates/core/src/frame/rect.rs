use serde::{Deserialize, Serialize};

use crate::linalg::{dot, Vec2};

/// Axis-aligned box `[x0, x1] x [y0, y1]` in coordinates rotated by `angle`,
/// i.e. the set of `R(angle) eta` for `eta` in the box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub angle: f64,
    pub x: [f64; 2],
    pub y: [f64; 2],
}

impl Rect {
    pub fn axis(x: [f64; 2], y: [f64; 2]) -> Rect {
        Rect { angle: 0.0, x, y }
    }

    pub fn width(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    pub fn height(&self) -> f64 {
        self.y[1] - self.y[0]
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn axes(&self) -> (Vec2, Vec2) {
        let (s, c) = self.angle.sin_cos();
        ([c, s], [-s, c])
    }

    /// Map local coordinates to the ambient plane.
    pub fn to_global(&self, eta: Vec2) -> Vec2 {
        let (e1, e2) = self.axes();
        [
            e1[0] * eta[0] + e2[0] * eta[1],
            e1[1] * eta[0] + e2[1] * eta[1],
        ]
    }

    pub fn to_local(&self, xi: Vec2) -> Vec2 {
        let (e1, e2) = self.axes();
        [dot(e1, xi), dot(e2, xi)]
    }

    pub fn contains(&self, xi: Vec2) -> bool {
        let p = self.to_local(xi);
        p[0] >= self.x[0] && p[0] <= self.x[1] && p[1] >= self.y[0] && p[1] <= self.y[1]
    }

    pub fn corners(&self) -> [Vec2; 4] {
        [
            self.to_global([self.x[0], self.y[0]]),
            self.to_global([self.x[1], self.y[0]]),
            self.to_global([self.x[1], self.y[1]]),
            self.to_global([self.x[0], self.y[1]]),
        ]
    }

    /// Largest distance from the origin.
    pub fn max_radius(&self) -> f64 {
        self.corners()
            .iter()
            .map(|c| c[0].hypot(c[1]))
            .fold(0.0, f64::max)
    }

    /// Separating-axis test; touching boxes count as disjoint.
    pub fn intersects(&self, other: &Rect) -> bool {
        let a = self.corners();
        let b = other.corners();
        let (a1, a2) = self.axes();
        let (b1, b2) = other.axes();
        for axis in [a1, a2, b1, b2] {
            let (amin, amax) = project(&a, axis);
            let (bmin, bmax) = project(&b, axis);
            if amax <= bmin || bmax <= amin {
                return false;
            }
        }
        true
    }

    /// True when `other` lies inside `self` (up to a relative slack).
    pub fn covers(&self, other: &Rect) -> bool {
        let tol = 1e-12 * (1.0 + other.max_radius());
        other.corners().iter().all(|&c| {
            let p = self.to_local(c);
            p[0] >= self.x[0] - tol
                && p[0] <= self.x[1] + tol
                && p[1] >= self.y[0] - tol
                && p[1] <= self.y[1] + tol
        })
    }
}

fn project(pts: &[Vec2; 4], axis: Vec2) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in pts {
        let v = dot(*p, axis);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}
