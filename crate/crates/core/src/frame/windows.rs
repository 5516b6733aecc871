use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const TWO_PI_3: f64 = 2.0 * PI / 3.0;
const FOUR_PI_3: f64 = 4.0 * PI / 3.0;
const EIGHT_PI_3: f64 = 8.0 * PI / 3.0;

/// Smooth monotone transition from 0 on `t <= 0` to 1 on `t >= 1`.
///
/// Both kinds satisfy `blend(t) + blend(1 - t) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Ramp {
    /// `g(t) / (g(t) + g(1 - t))` with `g(t) = exp(-1/t)`; infinitely smooth.
    #[default]
    Exponential,
    /// `t^p / (t^p + (1 - t)^p)`.
    Polynomial { order: u32 },
}

impl Ramp {
    pub fn polynomial(order: u32) -> Result<Ramp> {
        if order < 4 {
            return Err(Error::InvalidParameter(format!(
                "polynomial ramp order must be >= 4, got {order}"
            )));
        }
        Ok(Ramp::Polynomial { order })
    }

    pub fn blend(self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        match self {
            Ramp::Exponential => {
                let e = 1.0 / t - 1.0 / (1.0 - t);
                1.0 / (1.0 + e.exp())
            }
            Ramp::Polynomial { order } => {
                let a = t.powi(order as i32);
                let b = (1.0 - t).powi(order as i32);
                a / (a + b)
            }
        }
    }
}

/// `cos(pi b / 2)`, exactly 0 at `b = 1`.
fn cos_quarter(b: f64) -> f64 {
    if b >= 1.0 {
        0.0
    } else {
        (FRAC_PI_2 * b).cos()
    }
}

/// Radial windows `w0`, `w` and the angular window `nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct WindowSet {
    pub ramp: Ramp,
}

pub fn build_windows(ramp: Ramp) -> WindowSet {
    WindowSet { ramp }
}

impl WindowSet {
    fn falling(&self, r: f64) -> f64 {
        cos_quarter(self.ramp.blend((r - FOUR_PI_3) / FOUR_PI_3))
    }

    /// Coarse-scale window: 1 up to 4pi/3, decays to 0 at 8pi/3.
    pub fn w0(&self, r: f64) -> f64 {
        if r <= FOUR_PI_3 {
            1.0
        } else if r <= EIGHT_PI_3 {
            self.falling(r)
        } else {
            0.0
        }
    }

    /// Band-pass window supported on [2pi/3, 8pi/3].
    pub fn w(&self, r: f64) -> f64 {
        if !(TWO_PI_3..=EIGHT_PI_3).contains(&r) {
            0.0
        } else if r <= FOUR_PI_3 {
            (FRAC_PI_2 * self.ramp.blend((r - TWO_PI_3) / TWO_PI_3)).sin()
        } else {
            self.falling(r)
        }
    }

    /// Angular window supported on [-pi, pi].
    pub fn nu(&self, theta: f64) -> f64 {
        let a = theta.abs();
        if a > PI {
            0.0
        } else {
            cos_quarter(self.ramp.blend(a / PI))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_complement() {
        for ramp in [Ramp::Exponential, Ramp::Polynomial { order: 4 }] {
            for i in 0..=100 {
                let t = i as f64 / 100.0;
                assert!((ramp.blend(t) + ramp.blend(1.0 - t) - 1.0).abs() < 1e-15);
            }
        }
        assert!(Ramp::polynomial(3).is_err());
    }

    #[test]
    fn window_supports() {
        let ws = WindowSet::default();
        assert_eq!(ws.w0(0.0), 1.0);
        assert_eq!(ws.w(TWO_PI_3 - 0.01), 0.0);
        assert_eq!(ws.w(EIGHT_PI_3 + 0.01), 0.0);
        assert_eq!(ws.w0(EIGHT_PI_3 + 0.01), 0.0);
        assert_eq!(ws.nu(PI + 1e-9), 0.0);
        let s = ws.nu(0.4).powi(2) + ws.nu(0.4 - PI).powi(2);
        assert!((s - 1.0).abs() < 1e-10);
    }
}
