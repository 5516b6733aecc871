use gmix::budget::sub_budgets;
use gmix::field::{l2_distance, pair_inner, Atom, QuadratureConfig, SpectralFunction};
use gmix::frame::{CurveletIndex, Frame};
use gmix::gaussmix::{approximate_curvelet, GaussianMixture};
use gmix::scheme::*;
use proptest::prelude::*;

fn idx(j: u32, l: u32, k: [i64; 2]) -> CurveletIndex {
    CurveletIndex::new(j, l, k).unwrap()
}

fn small_seq() -> CoefficientSeq {
    rearrange(&[
        (1.0, idx(2, 0, [0, 0])),
        (-0.8, idx(3, 1, [1, -1])),
        (0.6, idx(0, 0, [2, 0])),
        (0.5, idx(4, 2, [0, 3])),
        (-0.45, idx(1, 0, [-1, 1])),
        (0.4, idx(2, 1, [3, 2])),
        (0.3, idx(4, 0, [-2, 0])),
        (-0.25, idx(3, 0, [0, 0])),
        (0.2, idx(2, 0, [1, 0])),
        (0.1, idx(0, 0, [0, 0])),
        (0.05, idx(5, 3, [4, 4])),
    ])
    .unwrap()
}

#[test]
fn rearrange_examples() {
    let (a, b, c) = (idx(0, 0, [0, 0]), idx(2, 1, [0, 0]), idx(4, 0, [1, 1]));
    let s = rearrange(&[(0.5, a), (0.9, b), (-0.7, c)]).unwrap();
    let order: Vec<CurveletIndex> = s.entries.iter().map(|e| e.1).collect();
    assert_eq!(order, vec![b, c, a]);
    let t = rearrange(&[(0.5, c), (-0.5, a), (0.5, b)]).unwrap();
    let order: Vec<CurveletIndex> = t.entries.iter().map(|e| e.1).collect();
    assert_eq!(order, vec![a, b, c]);
    assert!(matches!(rearrange(&[(1.0, a), (2.0, a)]), Err(gmix::Error::DuplicateIndex(_))));
    assert!(rearrange(&[(f64::NAN, a)]).is_err());
}

#[test]
fn class_norm_examples() {
    let raw: Vec<(f64, CurveletIndex)> = (1..=50).map(|n| (1.0 / n as f64, idx(1, 0, [n, 0]))).collect();
    let s = rearrange(&raw).unwrap();
    assert!((class_norm(&s, 1.0) - 1.0).abs() < 1e-15);
    assert!((class_norm(&s, 1.5) - 50f64.sqrt()).abs() < 1e-12);
    assert_eq!(class_norm(&CoefficientSeq::default(), 1.0), 0.0);
}

#[test]
fn reference_assembly() {
    let seq = small_seq();
    let cfg = ApproxConfig::default();
    let mut cache = GeneratorCache::default();
    let a = assemble(&seq, 256, 0.5, &cfg, &mut cache).unwrap();
    assert_eq!(a.plan.m_star, 8);
    assert_eq!(a.plan.sequence(), vec![11, 8, 5, 5, 4, 4, 4, 4]);
    assert_eq!(a.counts.len(), 8);
    assert!(a.mixture.len() <= 45);
    // the assembled mixture is the weighted sum of per-curvelet approximants
    let mut terms = Vec::new();
    for (n, (w, i)) in seq.head(8).iter().enumerate() {
        let m = a.plan.sub_budget(n + 1).unwrap();
        let g = approximate_curvelet(i, m, &cfg.scheme).unwrap();
        assert!(g.len() <= m);
        assert_eq!(a.counts[n], g.len());
        terms.extend(g.scaled(*w).terms);
    }
    assert_eq!(a.mixture, GaussianMixture::new(terms));
    assert_eq!(a.block_terms().iter().sum::<usize>(), a.mixture.len());
}

#[test]
fn empty_sequence() {
    let (m, rep) = approximate(&CoefficientSeq::default(), 256, 0.5, &ApproxConfig::default()).unwrap();
    assert!(m.is_empty());
    assert_eq!(rep.total_error, 0.0);
    assert_eq!(rep.i_plus, 0.0);
    assert_eq!(rep.i_minus, 0.0);
    assert_eq!(rep.terms_used, 0);
}

#[test]
fn tail_matches_summation() {
    let alpha = 1.5;
    let cfg = RateConfig {
        length: 300,
        ..RateConfig::default()
    };
    let seq = synthetic_seq(Profile::Power { alpha }, &cfg, 3).unwrap();
    for m in [0usize, 8, 64, 299, 300, 500] {
        let mut direct = 0.0;
        for n in (m + 1)..=300 {
            direct += (n as f64).powf(-2.0 * alpha);
        }
        let omega: Vec<f64> = seq.entries.iter().map(|e| e.0).collect();
        assert!((tail_norm(&omega, m) - direct.sqrt()).abs() < 1e-14);
        assert!((idealized_error(&seq, m) - direct.sqrt()).abs() < 1e-14);
    }
    assert!((class_norm(&seq, alpha) - 1.0).abs() < 1e-12);
}

#[test]
fn locality_and_reuse() {
    let cfg = RateConfig {
        length: 200,
        ..RateConfig::default()
    };
    let s1 = synthetic_seq(Profile::Power { alpha: 1.5 }, &cfg, 1).unwrap();
    let s2 = synthetic_seq(Profile::Cartoon, &cfg, 2).unwrap();
    for n in [256usize, 1024, 4096] {
        let mut c1 = GeneratorCache::default();
        let mut c2 = GeneratorCache::default();
        let a1 = assemble(&s1, n, 0.5, &cfg.approx, &mut c1).unwrap();
        let a2 = assemble(&s2, n, 0.5, &cfg.approx, &mut c2).unwrap();
        assert_eq!(a1.plan, a2.plan);
        assert_eq!(a1.counts.len(), a1.plan.m_star);
        assert!(a1.mixture.len() <= n && a2.mixture.len() <= n);
        let scales: std::collections::HashSet<u32> = s1.head(a1.plan.m_star).iter().map(|e| e.1.j).collect();
        let bound = scales.len() * (1 + (n as f64).log2() as usize);
        assert!(a1.distinct_generators <= bound);
        assert_eq!(c1.builds, a1.distinct_generators);
    }
}

#[test]
fn synthetic_sequences_are_reproducible() {
    let cfg = RateConfig::default();
    let a = synthetic_seq(Profile::Power { alpha: 1.5 }, &cfg, 7).unwrap();
    let b = synthetic_seq(Profile::Power { alpha: 1.5 }, &cfg, 7).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 1024);
    for (_, i) in &a.entries {
        assert!(i.j <= cfg.j_cap);
        assert!(i.k[0] * i.k[0] + i.k[1] * i.k[1] <= cfg.k_radius * cfg.k_radius);
    }
    assert!(draw_indices(10_000_000, 2, 4, 0).is_err());
    let c = Profile::Cartoon.value(4);
    assert!((c - 4f64.powf(-1.5) * (1.0 + 4f64.ln()).powf(1.5)).abs() < 1e-15);
}

#[test]
fn fit_slope_examples() {
    let pts: Vec<(f64, f64)> = [256.0, 512.0, 1024.0, 4096.0].iter().map(|&n| (n, 3.0 / n)).collect();
    assert!((fit_slope(&pts).unwrap() + 1.0).abs() < 1e-12);
    assert_eq!(fit_slope(&[(1.0, 1.0)]), None);
    assert_eq!(fit_slope(&[(2.0, 1.0), (2.0, 3.0)]), None);
}

#[test]
fn engine_matches_quadrature_for_curvelet_pairs() {
    let frame = Frame::default();
    let q = QuadratureConfig::default();
    let mut engine = PairEngine::new(frame, EnvelopeConfig::default());
    let pairs = [
        (idx(3, 1, [0, 0]), idx(3, 1, [1, 0])),
        (idx(2, 0, [0, 0]), idx(3, 0, [0, 1])),
        (idx(4, 1, [2, -1]), idx(4, 1, [2, -1])),
        (idx(0, 0, [0, 0]), idx(1, 0, [1, 1])),
        (idx(4, 0, [0, 0]), idx(4, 1, [1, 0])),
    ];
    for (a, b) in pairs {
        let direct = pair_inner(&frame, &Atom::Curvelet(a), &Atom::Curvelet(b), &q).unwrap();
        let fast = engine.curvelet_pair(&a, &b).unwrap_or(0.0);
        assert!((fast - direct.re).abs() < 1e-10, "{a} {b}: {fast} vs {}", direct.re);
    }
    // spectrally disjoint
    assert_eq!(engine.curvelet_pair(&idx(0, 0, [0, 0]), &idx(5, 0, [0, 0])), None);
}

#[test]
fn engine_matches_quadrature_for_cross_terms() {
    let frame = Frame::default();
    let q = QuadratureConfig::default();
    let cfg = ApproxConfig::default();
    let engine = PairEngine::new(frame, EnvelopeConfig::default());
    let atoms = [idx(2, 1, [0, 0]), idx(3, 0, [1, 2]), idx(1, 0, [0, -1])];
    let g = approximate_curvelet(&idx(2, 1, [0, 1]), 36, &cfg.scheme).unwrap();
    let fast = engine.cross_terms(&atoms, &g.terms);
    for (a, f) in atoms.iter().zip(&fast) {
        let mut direct = 0.0;
        for t in &g.terms {
            direct += pair_inner(&frame, &Atom::Curvelet(*a), &Atom::Gaussian(*t), &q).unwrap().re;
        }
        assert!((f - direct).abs() <= 1e-5 * (1.0 + direct.abs()), "{a}: {f} vs {direct}");
    }
}

#[test]
fn errors_match_quadrature() {
    let seq = small_seq();
    let cfg = ApproxConfig::default();
    let (mix, rep) = approximate(&seq, 256, 0.5, &cfg).unwrap();
    let frame = Frame::default();
    let q = QuadratureConfig::default();
    let f = SpectralFunction::from_curvelets(frame, &seq.entries);
    let total = l2_distance(&f, &SpectralFunction::from_mixture(frame, &mix), &q).unwrap();
    assert!((total - rep.total_error).abs() <= 1e-4 * total, "{total} vs {}", rep.total_error);
    let plan = sub_budgets(256, 0.5, cfg.n0).unwrap();
    let (ip, im) = error_split(&seq, &mix, &plan, &cfg);
    assert!((ip - rep.i_plus).abs() <= 1e-5 * ip, "{ip} vs {}", rep.i_plus);
    assert_eq!(im, rep.i_minus);
    assert!(rep.total_error <= rep.i_plus + rep.i_minus + 1e-6);
    let head = SpectralFunction::from_curvelets(frame, seq.head(8));
    let ip_q = l2_distance(&head, &SpectralFunction::from_mixture(frame, &mix), &q).unwrap();
    assert!((ip_q - ip).abs() <= 1e-4 * ip_q);
}

#[test]
fn rate_table_csv() {
    let cfg = RateConfig {
        length: 40,
        j_cap: 3,
        ..RateConfig::default()
    };
    let t = rate_study(Profile::Power { alpha: 1.5 }, &[256, 512], 0.5, 1, &cfg).unwrap();
    let csv = t.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n_budget,terms_used,m_star,i_plus,i_minus,total_error,seconds"));
    assert_eq!(lines.count(), 2);
    for r in &t.rows {
        assert!(r.terms_used <= r.n_budget);
    }
    assert!(t.slope.is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rearrangement_invariants(vals in proptest::collection::vec(-5.0f64..5.0, 1..40), seed in 0u64..1000) {
        let raw: Vec<(f64, CurveletIndex)> = vals
            .iter()
            .enumerate()
            .map(|(n, &w)| (w, idx(2, (n % 2) as u32, [n as i64, -(n as i64)])))
            .collect();
        let s = rearrange(&raw).unwrap();
        for w in s.entries.windows(2) {
            prop_assert!(w[0].0.abs() >= w[1].0.abs());
        }
        let mut shuffled = raw.clone();
        let k = (seed as usize) % shuffled.len();
        shuffled.rotate_left(k);
        shuffled.reverse();
        prop_assert_eq!(rearrange(&shuffled).unwrap(), s);
    }
}
