//! Gram-based L2 errors for finite curvelet sums against Gaussian mixtures.
//!
//! Integrals `\int A(xi) B(xi) e^{i y.xi} dxi` with `A` a wedge amplitude are
//! taken as midpoint sums over the wedge boxes. The integrand has compact
//! smooth support, so the midpoint sum is exact up to periodic aliasing and
//! the grid step only has to make the period exceed the spread of offsets
//! plus the spatial decay radius. Offsets beyond the decay radius are skipped.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::frame::{half_scale, orientation_count, wedge_boxes, CurveletIndex, Frame, Rect};
use crate::gaussmix::{gaussian_inner, GaussianTerm};
use crate::linalg::{self, Mat2, Vec2};
use crate::sum::{pairwise, pairwise_c};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeConfig {
    /// Radius, in generator coordinates, beyond which every generator is
    /// negligible; scaled by `D_j^-1` for each curvelet.
    pub generator_radius: f64,
    /// Relative level defining the spatial radius of Gaussian terms.
    pub gaussian_tol: f64,
    /// Safety factor on decay radii when sizing grid periods.
    pub period_factor: f64,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        EnvelopeConfig {
            generator_radius: 16.0,
            gaussian_tol: 1e-16,
            period_factor: 1.25,
        }
    }
}

impl EnvelopeConfig {
    /// Decay radii of a scale-j curvelet along and across its orientation.
    pub fn curvelet_axes(&self, j: u32) -> Vec2 {
        let r = self.generator_radius;
        match j {
            0 => [r, r],
            1 => [r / 2.0, r],
            _ => [r / 2f64.powi(j as i32), r / 2f64.powi(half_scale(j) as i32)],
        }
    }

    /// Isotropic spatial radius of a scale-j curvelet.
    pub fn curvelet_radius(&self, j: u32) -> f64 {
        let a = self.curvelet_axes(j);
        a[0].max(a[1])
    }
}

fn wedge_angle(j: u32, l: u32) -> f64 {
    PI * l as f64 / orientation_count(j) as f64
}

fn to_local(angle: f64, y: Vec2) -> Vec2 {
    let (s, c) = angle.sin_cos();
    [c * y[0] + s * y[1], -s * y[0] + c * y[1]]
}

/// Midpoint grid over one box, in the box's local axes.
struct Grid {
    rect: Rect,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl Grid {
    fn new(rect: Rect, period: Vec2) -> Grid {
        let nu = ((rect.width() * period[0] / (2.0 * PI)).ceil() as usize).max(8);
        let nv = ((rect.height() * period[1] / (2.0 * PI)).ceil() as usize).max(8);
        let du = rect.width() / nu as f64;
        let dv = rect.height() / nv as f64;
        Grid {
            u: (0..nu).map(|i| rect.x[0] + (i as f64 + 0.5) * du).collect(),
            v: (0..nv).map(|i| rect.y[0] + (i as f64 + 0.5) * dv).collect(),
            rect,
        }
    }

    fn cell(&self) -> f64 {
        self.rect.width() / self.u.len() as f64 * self.rect.height() / self.v.len() as f64
    }

    fn values<F: Fn(Vec2) -> f64>(&self, f: F) -> Vec<f64> {
        let mut g = Vec::with_capacity(self.u.len() * self.v.len());
        for &u in &self.u {
            for &v in &self.v {
                g.push(f(self.rect.to_global([u, v])));
            }
        }
        g
    }

    /// `sum_pq g_pq e^{i (y1 u_p + y2 v_q)} du dv`, `y` in local axes.
    fn transform(&self, g: &[f64], y: Vec2) -> Complex64 {
        let ev = phases(&self.v, y[1]);
        let eu = phases(&self.u, y[0]);
        let nv = self.v.len();
        let rows: Vec<Complex64> = eu
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let row = &g[i * nv..(i + 1) * nv];
                let (mut re, mut im) = (0.0, 0.0);
                for (g, e) in row.iter().zip(&ev) {
                    re += g * e.re;
                    im += g * e.im;
                }
                Complex64::new(re, im) * e
            })
            .collect();
        pairwise_c(&rows) * self.cell()
    }

    /// Same with complex samples.
    fn transform_c(&self, g: &[Complex64], y: Vec2) -> Complex64 {
        let ev = phases(&self.v, y[1]);
        let eu = phases(&self.u, y[0]);
        let nv = self.v.len();
        let rows: Vec<Complex64> = eu
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let row = &g[i * nv..(i + 1) * nv];
                let mut acc = Complex64::new(0.0, 0.0);
                for (g, e) in row.iter().zip(&ev) {
                    acc += g * e;
                }
                acc * e
            })
            .collect();
        pairwise_c(&rows) * self.cell()
    }
}

/// `e^{i y x_k}` on a uniform grid, by recurrence re-anchored every 64 steps.
fn phases(x: &[f64], y: f64) -> Vec<Complex64> {
    if x.is_empty() {
        return Vec::new();
    }
    let step = if x.len() > 1 {
        Complex64::from_polar(1.0, y * (x[1] - x[0]))
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut out = Vec::with_capacity(x.len());
    let mut e = Complex64::new(1.0, 0.0);
    for (k, &xk) in x.iter().enumerate() {
        if k % 64 == 0 {
            e = Complex64::from_polar(1.0, y * xk);
        }
        out.push(e);
        e *= step;
    }
    out
}

fn envelope(map: &Mat2, xi: Vec2) -> f64 {
    let li = linalg::inverse(map).expect("invertible map");
    let z = linalg::apply(&linalg::transpose(&li), xi);
    0.5 / linalg::det(map).abs() * (-(z[0] * z[0] + z[1] * z[1]) / 4.0).exp()
}

fn bucket(x: f64) -> f64 {
    2f64.powf(x.max(1e-3).log2().ceil())
}

/// Cache of curvelet pair tables plus the envelope model.
pub struct PairEngine {
    pub frame: Frame,
    pub env: EnvelopeConfig,
    tables: HashMap<TableKey, Vec<(Grid, Vec<f64>)>>,
}

type CurveletKey = (u32, u32);
/// Wedge pair plus the bits of the distance bucket.
type TableKey = (CurveletKey, CurveletKey, u64);

impl PairEngine {
    pub fn new(frame: Frame, env: EnvelopeConfig) -> PairEngine {
        PairEngine {
            frame,
            env,
            tables: HashMap::new(),
        }
    }

    pub fn table_count(&self) -> usize {
        self.tables.len()
    }

    fn spectrally_disjoint(a: &CurveletIndex, b: &CurveletIndex) -> bool {
        if a.j.abs_diff(b.j) > 1 {
            return true;
        }
        let ba = wedge_boxes(a.j, a.angle());
        let bb = wedge_boxes(b.j, b.angle());
        ba.iter().all(|x| bb.iter().all(|y| !x.intersects(y)))
    }

    /// Period per local axis of wedge `a` for offsets up to `reach`.
    fn period(&self, ja: u32, jb: u32, reach: Vec2) -> Vec2 {
        let ra = self.env.curvelet_axes(ja);
        let rb = self.env.curvelet_radius(jb);
        let f = self.env.period_factor;
        [reach[0] + f * (ra[0] + rb), reach[1] + f * (ra[1] + rb)]
    }

    /// `<gamma_a, gamma_b>`, or `None` when the pair is pruned.
    pub fn curvelet_pair(&mut self, a: &CurveletIndex, b: &CurveletIndex) -> Option<f64> {
        if Self::spectrally_disjoint(a, b) {
            return None;
        }
        // tabulate on the smaller-scale wedge
        let (a, b) = if (a.j, a.l) <= (b.j, b.l) { (a, b) } else { (b, a) };
        let reach = self.env.curvelet_radius(a.j) + self.env.curvelet_radius(b.j);
        let y = linalg::sub(b.center(), a.center());
        if linalg::norm(y) > reach {
            return None;
        }
        let angle = a.angle();
        let yl = to_local(angle, y);
        let bk = bucket(linalg::norm(y).max(reach / 4.0));
        let key = ((a.j, a.l), (b.j, b.l), bk.to_bits());
        if !self.tables.contains_key(&key) {
            let period = self.period(a.j, b.j, [2.0 * bk, 2.0 * bk]);
            let frame = self.frame;
            let bb = wedge_boxes(b.j, b.angle());
            let (ja, jb, angb) = (a.j, b.j, b.angle());
            let t = wedge_boxes(a.j, angle)
                .into_iter()
                .filter(|r| bb.iter().any(|c| c.intersects(r)))
                .map(|r| {
                    let g = Grid::new(r, period);
                    let v = g.values(|xi| {
                        let p = frame.curvelet_amplitude(ja, angle, xi);
                        if p == 0.0 {
                            0.0
                        } else {
                            p * frame.curvelet_amplitude(jb, angb, xi)
                        }
                    });
                    (g, v)
                })
                .collect();
            self.tables.insert(key, t);
        }
        let s: Complex64 = self.tables[&key].iter().map(|(g, v)| g.transform(v, yl)).sum();
        Some(s.re)
    }

    /// `<gamma_a, T>` for every atom, `T` given by its weighted terms.
    ///
    /// Atoms are grouped by wedge; on each wedge grid the transform of the
    /// relevant terms is accumulated once and read off for every atom.
    pub fn cross_terms(&self, atoms: &[CurveletIndex], terms: &[GaussianTerm]) -> Vec<f64> {
        let mut out = vec![0.0; atoms.len()];
        let mut groups: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
        for (i, a) in atoms.iter().enumerate() {
            groups.entry((a.j, a.l)).or_default().push(i);
        }
        let mut keys: Vec<_> = groups.keys().copied().collect();
        keys.sort();
        let radii: Vec<f64> = terms
            .iter()
            .map(|t| t.spatial_radius(self.env.gaussian_tol))
            .collect();
        for w in keys {
            let members = &groups[&w];
            let vals = self.wedge_cross(w, members.iter().map(|&i| atoms[i]).collect(), terms, &radii);
            for (&i, v) in members.iter().zip(vals) {
                out[i] = v;
            }
        }
        out
    }

    fn wedge_cross(&self, w: (u32, u32), atoms: Vec<CurveletIndex>, terms: &[GaussianTerm], radii: &[f64]) -> Vec<f64> {
        let (j, l) = w;
        let angle = wedge_angle(j, l);
        let r_atom = self.env.curvelet_radius(j);
        let centers: Vec<Vec2> = atoms.iter().map(|a| a.center()).collect();
        // relevant terms and, per atom, the offset spread in local axes
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut rel: Vec<usize> = Vec::new();
        let mut rmax: f64 = 0.0;
        for (t, term) in terms.iter().enumerate() {
            let mut hit = false;
            for c in &centers {
                let y = linalg::sub(term.center, *c);
                if linalg::norm(y) <= r_atom + radii[t] {
                    hit = true;
                    let yl = to_local(angle, y);
                    for k in 0..2 {
                        lo[k] = lo[k].min(yl[k]);
                        hi[k] = hi[k].max(yl[k]);
                    }
                }
            }
            if hit {
                rel.push(t);
                rmax = rmax.max(radii[t]);
            }
        }
        if rel.is_empty() {
            return vec![0.0; atoms.len()];
        }
        let ra = self.env.curvelet_axes(j);
        let f = self.env.period_factor;
        let period = [
            (hi[0] - lo[0]) + f * (ra[0] + rmax) + 1e-9,
            (hi[1] - lo[1]) + f * (ra[1] + rmax) + 1e-9,
        ];
        // terms grouped by their map: the envelope factor is shared
        let mut classes: HashMap<[u64; 4], Vec<usize>> = HashMap::new();
        for &t in &rel {
            let m = terms[t].map;
            classes
                .entry([m[0][0].to_bits(), m[0][1].to_bits(), m[1][0].to_bits(), m[1][1].to_bits()])
                .or_default()
                .push(t);
        }
        let mut ckeys: Vec<_> = classes.keys().copied().collect();
        ckeys.sort();
        let mut parts = vec![Vec::new(); atoms.len()];
        for rect in wedge_boxes(j, angle) {
            let grid = Grid::new(rect, period);
            let amp = grid.values(|xi| self.frame.curvelet_amplitude(j, angle, xi));
            let (nu, nv) = (grid.u.len(), grid.v.len());
            let mut acc = vec![Complex64::new(0.0, 0.0); nu * nv];
            for ck in &ckeys {
                let members = &classes[ck];
                let map = terms[members[0]].map;
                // conj of the term transforms: w E(xi) e^{+i x.xi}
                let local: Vec<Vec2> = members.iter().map(|&t| to_local(angle, terms[t].center)).collect();
                let bu: Vec<Vec<Complex64>> = local.iter().map(|x| phases(&grid.u, x[0])).collect();
                let bv: Vec<Vec<Complex64>> = local.iter().map(|x| phases(&grid.v, x[1])).collect();
                let wts: Vec<f64> = members.iter().map(|&t| terms[t].weight).collect();
                let mut row = vec![Complex64::new(0.0, 0.0); nv];
                for p in 0..nu {
                    let base = p * nv;
                    if amp[base..base + nv].iter().all(|&a| a == 0.0) {
                        continue;
                    }
                    row.iter_mut().for_each(|r| *r = Complex64::new(0.0, 0.0));
                    for k in 0..members.len() {
                        let c = bu[k][p] * wts[k];
                        for (r, e) in row.iter_mut().zip(&bv[k]) {
                            *r += c * e;
                        }
                    }
                    for q in 0..nv {
                        let a = amp[base + q];
                        if a != 0.0 {
                            let xi = grid.rect.to_global([grid.u[p], grid.v[q]]);
                            acc[base + q] += row[q] * (a * envelope(&map, xi));
                        }
                    }
                }
            }
            for (i, c) in centers.iter().enumerate() {
                let cl = to_local(angle, *c);
                parts[i].push(grid.transform_c(&acc, [-cl[0], -cl[1]]));
            }
        }
        parts.iter().map(|p| p.iter().sum::<Complex64>().re).collect()
    }
}

/// Pieces of `||f||^2` for `f = sum omega_a gamma_a`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GramPieces {
    /// `(a, b, <gamma_a, gamma_b>)` for `a <= b`, pruned pairs omitted.
    pub curvelet_pairs: Vec<(usize, usize, f64)>,
}

impl GramPieces {
    /// `|| sum_{a < m} omega_a gamma_a ||^2`.
    pub fn head_norm_sq(&self, omega: &[f64], m: usize) -> f64 {
        let v: Vec<f64> = self
            .curvelet_pairs
            .iter()
            .filter(|(a, b, _)| *a < m && *b < m)
            .map(|&(a, b, g)| {
                let s = omega[a] * omega[b] * g;
                if a == b {
                    s
                } else {
                    2.0 * s
                }
            })
            .collect();
        pairwise(&v)
    }
}

/// Gram entries of the curvelet part.
pub fn curvelet_gram(engine: &mut PairEngine, atoms: &[CurveletIndex]) -> GramPieces {
    let mut pairs = Vec::new();
    for a in 0..atoms.len() {
        for b in a..atoms.len() {
            if let Some(g) = engine.curvelet_pair(&atoms[a], &atoms[b]) {
                pairs.push((a, b, g));
            }
        }
    }
    GramPieces {
        curvelet_pairs: pairs,
    }
}

/// `||T||^2` by closed-form Gaussian pair integrals.
pub fn mixture_norm_sq(weighted: &[GaussianTerm]) -> f64 {
    let rows: Vec<f64> = (0..weighted.len())
        .map(|i| {
            let mut row = vec![gaussian_inner(&weighted[i], &weighted[i])];
            for k in i + 1..weighted.len() {
                row.push(2.0 * gaussian_inner(&weighted[i], &weighted[k]));
            }
            pairwise(&row)
        })
        .collect();
    pairwise(&rows)
}
