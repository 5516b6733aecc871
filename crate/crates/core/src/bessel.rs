//! Numerical audit of the stability estimates: star-norm partial sums,
//! sector counts, the growth of rho, lattice separation and truncated
//! dual-Gramian row sums.
//!
//! Every check is a certificate over a finite sample, not a proof.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use crate::frame::{half_scale, orientation_count, scale_geometry};
use crate::linalg::Vec2;
use crate::{Error, Result};

/// `rho(alpha, j) = sqrt(alpha^2 4^j + (1 - alpha^2) 4^floor(j/2))`.
pub fn rho(alpha: f64, j: u32) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must be in (0, 1], got {alpha}")));
    }
    let a2 = alpha * alpha;
    Ok((a2 * 4f64.powi(j as i32) + (1.0 - a2) * 4f64.powi(half_scale(j) as i32)).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaParams {
    pub j: f64,
    pub k: f64,
}

impl EtaParams {
    pub fn new(j: f64, k: f64) -> Result<EtaParams> {
        if !(j > 1.0) || !(k > 2.0) {
            return Err(Error::InvalidParameter(format!("need J > 1 and K > 2 (J = {j}, K = {k})")));
        }
        Ok(EtaParams { j, k })
    }

    /// `eta(xi) = min(|xi1|^J, 1) (1 + |xi|)^-K`.
    #[inline]
    pub fn eta(&self, xi: Vec2) -> f64 {
        let a = xi[0].abs();
        let m = if a >= 1.0 { 1.0 } else { pow(a, self.j) };
        m / pow(1.0 + xi[0].hypot(xi[1]), self.k)
    }
}

#[inline]
fn pow(x: f64, e: f64) -> f64 {
    if e.fract() == 0.0 && e.abs() < 64.0 {
        x.powi(e as i32)
    } else {
        x.powf(e)
    }
}

/// Calls `f(j, l, eta)` with `eta = D_j^-1 R*_{j,l} xi` for every `j <= j_max`.
/// The rotation is advanced by recurrence and re-anchored every 256 steps.
fn for_each_image(xi: Vec2, j_max: u32, mut f: impl FnMut(u32, u32, Vec2)) {
    for j in 0..=j_max {
        let g = scale_geometry(j);
        let n = orientation_count(j);
        let step = PI / n as f64;
        let (sd, cd) = step.sin_cos();
        let (mut s, mut c) = (0.0f64, 1.0f64);
        for l in 0..n {
            if l % 256 == 0 {
                let (a, b) = (step * l as f64).sin_cos();
                s = a;
                c = b;
            }
            // R* xi with R the rotation by l*step
            let r = [c * xi[0] + s * xi[1], -s * xi[0] + c * xi[1]];
            f(j, l, [r[0] / g.d1, r[1] / g.d2]);
            let c2 = c * cd - s * sd;
            s = s * cd + c * sd;
            c = c2;
        }
    }
}

/// `sum_{j <= j_max} sum_l eta(D_j^-1 R*_{j,l} xi)`.
pub fn star_norm_partial(p: &EtaParams, xi: Vec2, j_max: u32) -> f64 {
    star_norm_partials(p, xi, &[j_max])[0]
}

/// Partial sums at several cutoffs in one pass (cutoffs ascending).
pub fn star_norm_partials(p: &EtaParams, xi: Vec2, cutoffs: &[u32]) -> Vec<f64> {
    let j_max = cutoffs.iter().copied().max().unwrap_or(0);
    let mut per_scale = vec![0.0; j_max as usize + 1];
    for_each_image(xi, j_max, |j, _, eta| per_scale[j as usize] += p.eta(eta));
    cutoffs
        .iter()
        .map(|&c| per_scale[..=c as usize].iter().sum())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorSpec {
    pub s: i32,
    pub t: u32,
    /// Quadrant 0..=3; 1, 2, 3 are the images under S1, S2, S3.
    pub k: u8,
}

impl SectorSpec {
    pub fn new(s: i32, t: u32, k: u8) -> Result<SectorSpec> {
        if k > 3 {
            return Err(Error::InvalidParameter(format!("quadrant must be 0..=3, got {k}")));
        }
        Ok(SectorSpec { s, t, k })
    }

    /// `S_k` (an involution).
    pub fn reflect(&self, p: Vec2) -> Vec2 {
        match self.k {
            0 => p,
            1 => [-p[0], p[1]],
            2 => [-p[0], -p[1]],
            _ => [p[0], -p[1]],
        }
    }

    /// Membership in `V^k_{s,t}`.
    pub fn contains(&self, p: Vec2) -> bool {
        let q = self.reflect(p);
        let r = q[0].hypot(q[1]);
        let lo = 2f64.powi(self.s);
        if r < lo || r > 2.0 * lo || q[0] < 0.0 || q[1] < 0.0 {
            return false;
        }
        let c = q[0] / r;
        let top = 2f64.powi(-(self.t as i32));
        c >= top / 2.0 && c <= top
    }

    /// Angular interval of `R* xi` that can map into the sector at scale j.
    fn angle_window(&self, j: u32) -> (f64, f64) {
        let g = scale_geometry(j);
        let top = 2f64.powi(-(self.t as i32));
        let (ta, tb) = (top.acos(), (top / 2.0).acos());
        let ratio = g.d2 / g.d1;
        let (a, b) = ((ratio * ta.tan()).atan(), (ratio * tb.tan()).atan());
        match self.k {
            0 => (a, b),
            1 => (PI - b, PI - a),
            2 => (a - PI, b - PI),
            _ => (-b, -a),
        }
    }
}

/// Number of `(j, l)` with `j <= j_max` and `D_j^-1 R*_{j,l} xi` in the sector.
pub fn sector_count(spec: &SectorSpec, xi: Vec2, j_max: u32) -> usize {
    let r = xi[0].hypot(xi[1]);
    if r == 0.0 {
        return 0;
    }
    let theta = xi[1].atan2(xi[0]);
    let lo = 2f64.powi(spec.s);
    let mut count = 0;
    for j in 0..=j_max {
        let g = scale_geometry(j);
        // |D^-1 R* xi| lies between r / 2^j and r / 2^floor(j/2)
        if r / g.d1 > 2.0 * lo || r / g.d2 < lo {
            continue;
        }
        let n = orientation_count(j) as i64;
        let step = PI / n as f64;
        let (a, b) = spec.angle_window(j);
        let mut seen = std::collections::BTreeSet::new();
        for wrap in -2..=2 {
            let base = theta + 2.0 * PI * wrap as f64;
            // theta - l step in [a, b]  <=>  l in [(base - b)/step, (base - a)/step]
            let l0 = ((base - b) / step).floor() as i64 - 1;
            let l1 = ((base - a) / step).ceil() as i64 + 1;
            for l in l0.max(0)..=l1.min(n - 1) {
                seen.insert(l);
            }
        }
        for l in seen {
            let (s, c) = (step * l as f64).sin_cos();
            let p = [
                (c * xi[0] + s * xi[1]) / g.d1,
                (-s * xi[0] + c * xi[1]) / g.d2,
            ];
            if spec.contains(p) {
                count += 1;
            }
        }
    }
    count
}

/// Brute-force variant of [`sector_count`] visiting every orientation.
pub fn sector_count_exhaustive(spec: &SectorSpec, xi: Vec2, j_max: u32) -> usize {
    let mut count = 0;
    for_each_image(xi, j_max, |_, _, p| {
        if spec.contains(p) {
            count += 1
        }
    });
    count
}

/// Bound `9 * 2^t` on sector counts.
pub fn sector_bound(t: u32) -> usize {
    9 << t
}

/// Separation `min(eps1, eps2)` of the lattice `diag(eps1, eps2) Z^2`.
pub fn lattice_separation(j: u32) -> f64 {
    let g = scale_geometry(j);
    g.eps1.min(g.eps2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowSum {
    pub value: f64,
    /// Share of the inner sums contributed by the outermost lattice shell.
    pub boundary_fraction: f64,
    /// Set when the boundary share exceeds 1e-10.
    pub truncation_warning: bool,
}

/// Truncated dual-Gramian row sum
/// `sum_{j,l} |Psi_j(eta)| sum_{k in Z_j, |k| <= radius} |Psi_j(eta - k)|`
/// with `eta = D_j^-1 R*_{j,l} xi`; `psi(j, x)` returns `|Psi_j(x)|`.
pub fn gramian_row_sum(xi: Vec2, psi: &dyn Fn(u32, Vec2) -> f64, j_max: u32, radius: f64) -> RowSum {
    let mut total = 0.0;
    let mut boundary = 0.0;
    let lattices: Vec<(f64, f64, i64, i64)> = (0..=j_max)
        .map(|j| {
            let g = scale_geometry(j);
            (g.eps1, g.eps2, (radius / g.eps1).floor() as i64, (radius / g.eps2).floor() as i64)
        })
        .collect();
    for_each_image(xi, j_max, |j, _, eta| {
        let outer = psi(j, eta);
        if outer == 0.0 {
            return;
        }
        let (e1, e2, n1, n2) = lattices[j as usize];
        let shell = radius - e1.max(e2);
        let mut inner = 0.0;
        let mut edge = 0.0;
        for a in -n1..=n1 {
            for b in -n2..=n2 {
                let k = [a as f64 * e1, b as f64 * e2];
                let kn = k[0].hypot(k[1]);
                if kn > radius {
                    continue;
                }
                let v = psi(j, [eta[0] - k[0], eta[1] - k[1]]);
                inner += v;
                if kn > shell {
                    edge += v;
                }
            }
        }
        total += outer * inner;
        boundary += outer * edge;
    });
    let fraction = if total > 0.0 { boundary / total } else { 0.0 };
    RowSum {
        value: total,
        boundary_fraction: fraction,
        truncation_warning: fraction > 1e-10,
    }
}

/// One audit line, with the seed and a short note on how it was computed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub check: String,
    pub samples: usize,
    pub j_max: u32,
    pub max_value: f64,
    pub bound: f64,
    pub pass: bool,
    pub seed: u64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub eta: EtaParams,
    pub j_max: u32,
    /// Star-norm convergence is judged between `j_low` and `j_max`.
    pub j_low: u32,
    pub star_samples: usize,
    pub sector_samples: usize,
    pub rho_samples: usize,
    pub row_samples: usize,
    /// Cutoff for row sums (kept small: the outer sum has 2^floor(j/2) terms per scale).
    pub row_j_max: u32,
    pub row_radius: f64,
    /// `log2 |xi|` range for star-norm samples.
    pub star_log2_range: (f64, f64),
    pub seed: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            eta: EtaParams { j: 2.0, k: 3.0 },
            j_max: 40,
            j_low: 20,
            star_samples: 1000,
            sector_samples: 10_000,
            rho_samples: 10_000,
            row_samples: 200,
            row_j_max: 16,
            row_radius: 64.0,
            star_log2_range: (-6.0, 8.0),
            seed: 0x5eed,
        }
    }
}

fn random_direction(rng: &mut Pcg64, log2_lo: f64, log2_hi: f64) -> Vec2 {
    let r = 2f64.powf(rng.gen_range(log2_lo..log2_hi));
    let th = rng.gen_range(-PI..PI);
    [r * th.cos(), r * th.sin()]
}

/// Star-norm convergence: largest relative increment between the two cutoffs.
pub fn audit_star_norm(cfg: &AuditConfig) -> AuditRecord {
    let mut rng = Pcg64::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.star_samples {
        let xi = random_direction(&mut rng, cfg.star_log2_range.0, cfg.star_log2_range.1);
        let v = star_norm_partials(&cfg.eta, xi, &[cfg.j_low, cfg.j_max]);
        let rel = if v[0] > 0.0 { (v[1] - v[0]) / v[0] } else { 0.0 };
        worst = worst.max(rel);
    }
    AuditRecord {
        check: "star_norm_increment".into(),
        samples: cfg.star_samples,
        j_max: cfg.j_max,
        max_value: worst,
        bound: 1e-3,
        pass: worst <= 1e-3,
        seed: cfg.seed,
        note: format!(
            "relative increment from j_max {} to {}; log2|xi| uniform in [{}, {}]",
            cfg.j_low, cfg.j_max, cfg.star_log2_range.0, cfg.star_log2_range.1
        ),
    }
}

/// Sector counts against `9 * 2^t`; `max_value` is the worst count/bound ratio.
pub fn audit_sectors(cfg: &AuditConfig) -> AuditRecord {
    let mut rng = Pcg64::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.sector_samples {
        let spec = SectorSpec {
            s: rng.gen_range(-10..=10),
            t: rng.gen_range(0..=8),
            k: rng.gen_range(0..=3),
        };
        // |xi| spread so that some scale maps it near radius 2^s
        let xi = random_direction(&mut rng, spec.s as f64 - 1.0, spec.s as f64 + cfg.j_max as f64 + 1.0);
        let c = sector_count(&spec, xi, cfg.j_max);
        worst = worst.max(c as f64 / sector_bound(spec.t) as f64);
    }
    AuditRecord {
        check: "sector_count".into(),
        samples: cfg.sector_samples,
        j_max: cfg.j_max,
        max_value: worst,
        bound: 1.0,
        pass: worst <= 1.0,
        seed: cfg.seed.wrapping_add(1),
        note: "max over samples of count / (9 * 2^t); s in [-10, 10], t in [0, 8]".into(),
    }
}

/// `rho(alpha/2, j+2) >= sqrt 2 rho(alpha, j)` and monotonicity.
pub fn audit_rho(cfg: &AuditConfig) -> AuditRecord {
    let mut rng = Pcg64::seed_from_u64(cfg.seed.wrapping_add(2));
    let mut worst: f64 = 0.0;
    let mut monotone = true;
    for n in 0..cfg.rho_samples {
        let alpha: f64 = 1.0 - rng.gen::<f64>();
        let j = (n as u32) % (cfg.j_max + 1);
        let base = rho(alpha, j).expect("alpha in range");
        let grown = rho(alpha / 2.0, j + 2).expect("alpha in range");
        worst = worst.max(2f64.sqrt() * base / grown);
        let a2 = (alpha * 1.1).min(1.0);
        monotone &= rho(a2, j).unwrap() >= base && rho(alpha, j + 1).unwrap() >= base;
    }
    AuditRecord {
        check: "rho_growth".into(),
        samples: cfg.rho_samples,
        j_max: cfg.j_max,
        max_value: worst,
        bound: 1.0,
        pass: worst <= 1.0 && monotone,
        seed: cfg.seed.wrapping_add(2),
        note: "max over samples of sqrt2 rho(a, j) / rho(a/2, j+2); monotonicity checked".into(),
    }
}

pub fn audit_separation(cfg: &AuditConfig) -> AuditRecord {
    let worst = (0..=cfg.j_max)
        .map(|j| 4.0 * PI / lattice_separation(j))
        .fold(0.0, f64::max);
    AuditRecord {
        check: "lattice_separation".into(),
        samples: cfg.j_max as usize + 1,
        j_max: cfg.j_max,
        max_value: worst,
        bound: 1.0,
        pass: worst <= 1.0 + 1e-12,
        seed: cfg.seed,
        note: "max over scales of 4 pi / q(Z_j)".into(),
    }
}

/// Row sums of the eta surrogate: max must stay within twice the median.
pub fn audit_row_sums(cfg: &AuditConfig) -> AuditRecord {
    let mut rng = Pcg64::seed_from_u64(cfg.seed.wrapping_add(3));
    let eta = cfg.eta;
    let psi = move |_j: u32, x: Vec2| eta.eta(x);
    let mut values = Vec::with_capacity(cfg.row_samples);
    let mut warned = 0;
    for _ in 0..cfg.row_samples {
        let xi = random_direction(&mut rng, 0.0, cfg.row_j_max as f64 / 2.0);
        let r = gramian_row_sum(xi, &psi, cfg.row_j_max, cfg.row_radius);
        warned += r.truncation_warning as usize;
        values.push(r.value);
    }
    values.sort_by(f64::total_cmp);
    let max = values.last().copied().unwrap_or(0.0);
    let median = values.get(values.len() / 2).copied().unwrap_or(0.0);
    let ratio = if median > 0.0 { max / median } else { 0.0 };
    AuditRecord {
        check: "row_sum_uniformity".into(),
        samples: cfg.row_samples,
        j_max: cfg.row_j_max,
        max_value: ratio,
        bound: 2.0,
        pass: max.is_finite() && ratio <= 2.0,
        seed: cfg.seed.wrapping_add(3),
        note: format!(
            "max/median of eta-surrogate row sums, radius {}; max {max:.6e}, median {median:.6e}; {warned} samples flagged truncation",
            cfg.row_radius
        ),
    }
}

pub fn run_audit(cfg: &AuditConfig) -> Vec<AuditRecord> {
    vec![
        audit_star_norm(cfg),
        audit_sectors(cfg),
        audit_rho(cfg),
        audit_separation(cfg),
        audit_row_sums(cfg),
    ]
}

