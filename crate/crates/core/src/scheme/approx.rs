use std::collections::HashMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::engine::{curvelet_gram, mixture_norm_sq, EnvelopeConfig, GramPieces, PairEngine};
use super::seq::CoefficientSeq;
use crate::budget::{sub_budgets, BudgetPlan};
use crate::frame::{apply_unitary, CurveletIndex};
use crate::gaussmix::{approximate_generator, GaussianMixture, GaussianTerm, SchemeConfig};
use crate::sum::pairwise;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxConfig {
    pub n0: usize,
    pub scheme: SchemeConfig,
    pub envelope: EnvelopeConfig,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        ApproxConfig {
            n0: 3,
            scheme: SchemeConfig::default(),
            envelope: EnvelopeConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub n_budget: usize,
    pub beta: f64,
    pub m_star: usize,
    /// Gaussian terms used per dyadic block.
    pub block_terms: Vec<usize>,
    pub terms_used: usize,
    pub distinct_generators: usize,
    pub i_plus: f64,
    pub i_minus: f64,
    pub total_error: f64,
    pub seconds: f64,
}

/// Generator approximations keyed by (scale, budget).
#[derive(Default)]
pub struct GeneratorCache {
    map: HashMap<(u32, usize), GaussianMixture>,
    pub builds: usize,
}

impl GeneratorCache {
    pub fn get(&mut self, j: u32, m: usize, cfg: &SchemeConfig) -> Result<&GaussianMixture> {
        if !self.map.contains_key(&(j, m)) {
            let g = approximate_generator(j, m, cfg)?;
            self.builds += 1;
            self.map.insert((j, m), g);
        }
        Ok(&self.map[&(j, m)])
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// `T_N f` before error evaluation.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub plan: BudgetPlan,
    pub mixture: GaussianMixture,
    /// Term count of each approximated coefficient.
    pub counts: Vec<usize>,
    pub distinct_generators: usize,
}

impl Assembly {
    pub fn block_terms(&self) -> Vec<usize> {
        self.plan
            .blocks
            .iter()
            .map(|b| {
                let (lo, hi) = b.range();
                (lo..=hi)
                    .filter_map(|n| self.counts.get(n - 1))
                    .sum()
            })
            .collect()
    }
}

pub fn assemble(
    seq: &CoefficientSeq,
    n: usize,
    beta: f64,
    cfg: &ApproxConfig,
    cache: &mut GeneratorCache,
) -> Result<Assembly> {
    let plan = sub_budgets(n, beta, cfg.n0)?;
    let mut terms: Vec<GaussianTerm> = Vec::new();
    let mut counts = Vec::new();
    let mut used = std::collections::HashSet::new();
    for (pos, (omega, index)) in seq.head(plan.m_star).iter().enumerate() {
        let m = plan.sub_budget(pos + 1).expect("position inside plan");
        let g = cache.get(index.j, m, &cfg.scheme)?;
        used.insert((index.j, m));
        let mapped = apply_unitary(index, g).scaled(*omega);
        counts.push(mapped.len());
        terms.extend(mapped.terms);
    }
    Ok(Assembly {
        plan,
        mixture: GaussianMixture::new(terms),
        counts,
        distinct_generators: used.len(),
    })
}

/// Gram data of a fixed target `f`, reusable across budgets.
pub struct Target {
    pub omega: Vec<f64>,
    pub atoms: Vec<CurveletIndex>,
    pub gram: GramPieces,
    pub norm_sq: f64,
}

impl Target {
    pub fn new(seq: &CoefficientSeq, engine: &mut PairEngine) -> Target {
        let omega: Vec<f64> = seq.entries.iter().map(|e| e.0).collect();
        let atoms: Vec<CurveletIndex> = seq.entries.iter().map(|e| e.1).collect();
        let gram = curvelet_gram(engine, &atoms);
        let norm_sq = gram.head_norm_sq(&omega, atoms.len());
        Target {
            omega,
            atoms,
            gram,
            norm_sq,
        }
    }

    /// `(I+, I-, ||f - T||)` where the head is the first `m` entries.
    pub fn errors(&self, engine: &mut PairEngine, mixture: &GaussianMixture, m: usize) -> (f64, f64, f64) {
        let cross = engine.cross_terms(&self.atoms, &mixture.terms);
        let t_sq = mixture_norm_sq(&mixture.terms);
        let m = m.min(self.atoms.len());
        let weighted: Vec<f64> = cross.iter().zip(&self.omega).map(|(c, w)| c * w).collect();
        let head_cross = pairwise(&weighted[..m]);
        let all_cross = pairwise(&weighted);
        let head_sq = self.gram.head_norm_sq(&self.omega, m);
        let i_plus = (head_sq - 2.0 * head_cross + t_sq).max(0.0).sqrt();
        let total = (self.norm_sq - 2.0 * all_cross + t_sq).max(0.0).sqrt();
        (i_plus, tail_norm(&self.omega, m), total)
    }
}

/// `sqrt(sum_{n > m} omega_n^2)`.
pub fn tail_norm(omega: &[f64], m: usize) -> f64 {
    let sq: Vec<f64> = omega[m.min(omega.len())..].iter().map(|w| w * w).collect();
    pairwise(&sq).sqrt()
}

/// Runs the whole scheme and evaluates its errors.
pub fn approximate(
    seq: &CoefficientSeq,
    n: usize,
    beta: f64,
    cfg: &ApproxConfig,
) -> Result<(GaussianMixture, ApproxReport)> {
    let mut engine = PairEngine::new(cfg.scheme.frame, cfg.envelope.clone());
    let target = Target::new(seq, &mut engine);
    let mut cache = GeneratorCache::default();
    approximate_with(&target, seq, n, beta, cfg, &mut engine, &mut cache)
}

pub fn approximate_with(
    target: &Target,
    seq: &CoefficientSeq,
    n: usize,
    beta: f64,
    cfg: &ApproxConfig,
    engine: &mut PairEngine,
    cache: &mut GeneratorCache,
) -> Result<(GaussianMixture, ApproxReport)> {
    let start = Instant::now();
    let a = assemble(seq, n, beta, cfg, cache)?;
    let (i_plus, i_minus, total_error) = target.errors(engine, &a.mixture, a.plan.m_star);
    let report = ApproxReport {
        n_budget: n,
        beta,
        m_star: a.plan.m_star,
        block_terms: a.block_terms(),
        terms_used: a.mixture.len(),
        distinct_generators: a.distinct_generators,
        i_plus,
        i_minus,
        total_error,
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok((a.mixture, report))
}

/// `(I+, I-)` for a given mixture and plan.
pub fn error_split(
    seq: &CoefficientSeq,
    mixture: &GaussianMixture,
    plan: &BudgetPlan,
    cfg: &ApproxConfig,
) -> (f64, f64) {
    let mut engine = PairEngine::new(cfg.scheme.frame, cfg.envelope.clone());
    let head = CoefficientSeq {
        entries: seq.head(plan.m_star).to_vec(),
    };
    let target = Target::new(&head, &mut engine);
    let (i_plus, _, _) = target.errors(&mut engine, mixture, plan.m_star);
    let omega: Vec<f64> = seq.entries.iter().map(|e| e.0).collect();
    (i_plus, tail_norm(&omega, plan.m_star))
}
