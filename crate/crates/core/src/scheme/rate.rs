use std::collections::HashSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use super::approx::{approximate_with, tail_norm, ApproxConfig, GeneratorCache, Target};
use super::engine::PairEngine;
use super::seq::{rearrange, CoefficientSeq};
use crate::budget::terminal_index;
use crate::frame::{orientation_count, CurveletIndex};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Profile {
    Power { alpha: f64 },
    Cartoon,
}

impl Profile {
    pub fn value(&self, n: usize) -> f64 {
        let x = n as f64;
        match *self {
            Profile::Power { alpha } => x.powf(-alpha),
            Profile::Cartoon => x.powf(-1.5) * (1.0 + x.ln()).powf(1.5),
        }
    }

    /// Factor removed from the error before fitting.
    pub fn normalizer(&self, n_budget: usize) -> f64 {
        match self {
            Profile::Power { .. } => 1.0,
            Profile::Cartoon => (n_budget as f64).ln().powf(1.5),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateConfig {
    pub approx: ApproxConfig,
    /// Number of synthetic coefficients.
    pub length: usize,
    pub j_cap: u32,
    pub k_radius: i64,
    /// Errors below this are excluded from the fit.
    pub error_floor: f64,
}

impl Default for RateConfig {
    fn default() -> Self {
        RateConfig {
            approx: ApproxConfig::default(),
            length: 1024,
            j_cap: 6,
            k_radius: 16,
            error_floor: 1e-9,
        }
    }
}

/// Distinct indices with scale drawn proportionally to the orientation count.
pub fn draw_indices(count: usize, j_cap: u32, k_radius: i64, seed: u64) -> Result<Vec<CurveletIndex>> {
    let weights: Vec<u32> = (0..=j_cap).map(orientation_count).collect();
    let capacity: f64 = weights.iter().map(|&w| w as f64).sum::<f64>() * std::f64::consts::PI * (k_radius as f64).powi(2);
    if count as f64 > 0.5 * capacity {
        return Err(Error::InvalidParameter(format!("cannot draw {count} distinct indices")));
    }
    let scales = WeightedIndex::new(&weights).expect("positive weights");
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let j = scales.sample(&mut rng) as u32;
        let l = rng.gen_range(0..orientation_count(j));
        let k = [
            rng.gen_range(-k_radius..=k_radius),
            rng.gen_range(-k_radius..=k_radius),
        ];
        if k[0] * k[0] + k[1] * k[1] > k_radius * k_radius {
            continue;
        }
        let idx = CurveletIndex { j, l, k };
        if seen.insert(idx) {
            out.push(idx);
        }
    }
    Ok(out)
}

/// Profile values on seeded indices with seeded signs.
pub fn synthetic_seq(profile: Profile, cfg: &RateConfig, seed: u64) -> Result<CoefficientSeq> {
    let idx = draw_indices(cfg.length, cfg.j_cap, cfg.k_radius, seed)?;
    let mut rng = Pcg64::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let raw: Vec<(f64, CurveletIndex)> = idx
        .into_iter()
        .enumerate()
        .map(|(n, i)| {
            let s = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            (s * profile.value(n + 1), i)
        })
        .collect();
    rearrange(&raw)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub n_budget: usize,
    pub terms_used: usize,
    pub m_star: usize,
    pub i_plus: f64,
    pub i_minus: f64,
    pub total_error: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    pub profile: Profile,
    pub beta: f64,
    pub seed: u64,
    pub rows: Vec<RateRow>,
    /// Thresholding error with exact curvelets, per row.
    pub baseline: Vec<f64>,
    pub slope: Option<f64>,
    pub baseline_slope: Option<f64>,
    pub distinct_generators: usize,
}

impl RateTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n_budget,terms_used,m_star,i_plus,i_minus,total_error,seconds\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{:.16e},{:.16e},{:.16e},{:.6}\n",
                r.n_budget, r.terms_used, r.m_star, r.i_plus, r.i_minus, r.total_error, r.seconds
            ));
        }
        s
    }
}

/// Ordinary least squares slope of `log y` against `log x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// Error of keeping the first `m_star` coefficients exactly.
pub fn idealized_error(seq: &CoefficientSeq, m_star: usize) -> f64 {
    let omega: Vec<f64> = seq.entries.iter().map(|e| e.0).collect();
    tail_norm(&omega, m_star)
}

pub fn rate_study(profile: Profile, ns: &[usize], beta: f64, seed: u64, cfg: &RateConfig) -> Result<RateTable> {
    let seq = synthetic_seq(profile, cfg, seed)?;
    rate_study_on(&seq, profile, ns, beta, seed, cfg)
}

pub fn rate_study_on(
    seq: &CoefficientSeq,
    profile: Profile,
    ns: &[usize],
    beta: f64,
    seed: u64,
    cfg: &RateConfig,
) -> Result<RateTable> {
    let mut engine = PairEngine::new(cfg.approx.scheme.frame, cfg.approx.envelope.clone());
    let target = Target::new(seq, &mut engine);
    let mut cache = GeneratorCache::default();
    let mut rows = Vec::new();
    let mut baseline = Vec::new();
    for &n in ns {
        let (_, rep) = approximate_with(&target, seq, n, beta, &cfg.approx, &mut engine, &mut cache)?;
        baseline.push(idealized_error(seq, terminal_index(n, beta, cfg.approx.n0)));
        rows.push(RateRow {
            n_budget: n,
            terms_used: rep.terms_used,
            m_star: rep.m_star,
            i_plus: rep.i_plus,
            i_minus: rep.i_minus,
            total_error: rep.total_error,
            seconds: rep.seconds,
        });
    }
    let fit = |v: &dyn Fn(&RateRow, usize) -> f64| {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.n_budget as f64, v(r, i)))
            .filter(|p| p.1 >= 10.0 * cfg.error_floor)
            .map(|(x, y)| (x, y / profile.normalizer(x as usize)))
            .collect();
        fit_slope(&pts)
    };
    let slope = fit(&|r, _| r.total_error);
    let baseline_slope = fit(&|_, i| baseline[i]);
    Ok(RateTable {
        profile,
        beta,
        seed,
        rows,
        baseline,
        slope,
        baseline_slope,
        distinct_generators: cache.builds,
    })
}
