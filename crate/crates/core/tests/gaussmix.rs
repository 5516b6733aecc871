use std::f64::consts::PI;

use gmix::field::{l2_distance, Atom, QuadratureConfig, SpectralFunction};
use gmix::frame::{build_windows, CurveletIndex, Frame, Ramp, SUPPORT_B};
use gmix::gaussmix::*;
use gmix::linalg::IDENTITY;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

fn cfg() -> SchemeConfig {
    SchemeConfig::default()
}

// Closed-form transform of w exp(-|L(x - x0)|^2), written out independently.
fn ft_oracle(w: f64, l: [[f64; 2]; 2], x0: [f64; 2], xi: [f64; 2]) -> Complex64 {
    let det = l[0][0] * l[1][1] - l[0][1] * l[1][0];
    // L^-T xi
    let a = (l[1][1] * xi[0] - l[1][0] * xi[1]) / det;
    let b = (-l[0][1] * xi[0] + l[0][0] * xi[1]) / det;
    let amp = w * 0.5 / det.abs() * (-(a * a + b * b) / 4.0).exp();
    Complex64::from_polar(amp, -(x0[0] * xi[0] + x0[1] * xi[1]))
}

// (2 pi)^-1 \int F^/phi^ e^{i alpha.xi} for the coarse generator at `dilation`,
// on a plain Cartesian midpoint grid.
fn deconvolution_oracle(dilation: f64, alpha: [f64; 2]) -> f64 {
    let ws = build_windows(Ramp::Exponential);
    let r = 8.0 * PI / 3.0 / dilation * 1.01;
    let n = 700;
    let dx = 2.0 * r / n as f64;
    let mut acc = 0.0;
    for a in 0..n {
        let x = -r + (a as f64 + 0.5) * dx;
        for b in 0..n {
            let y = -r + (b as f64 + 0.5) * dx;
            let f = ws.w0(dilation * x.hypot(y)) / (16.0 * PI / 3.0);
            if f == 0.0 {
                continue;
            }
            let phi = 0.5 * (-(x * x + y * y) / 4.0).exp();
            acc += f / phi * (alpha[0] * x + alpha[1] * y).cos();
        }
    }
    acc * dx * dx / (2.0 * PI)
}

#[test]
fn gaussian_ft_examples() {
    assert_eq!(gaussian_ft(&GaussianTerm::standard(), [0.0, 0.0]).re, 0.5);
    let t = GaussianTerm::new(2.0, [[1.3, 0.4], [0.0, 0.8]], [0.3, -0.2]).unwrap();
    let mut rng = Pcg64::seed_from_u64(3);
    for _ in 0..20 {
        let xi = [rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0)];
        let d = gaussian_ft(&t, xi) - ft_oracle(2.0, t.map, t.center, xi);
        assert!(d.norm() < 1e-15);
    }
    assert!(GaussianTerm::new(1.0, [[1.0, 2.0], [0.5, 1.0]], [0.0, 0.0]).is_err());
}

#[test]
fn gaussian_ft_matches_spatial_quadrature() {
    let t = GaussianTerm::new(2.0, [[1.3, 0.4], [0.0, 0.8]], [0.3, -0.2]).unwrap();
    let n = 400;
    let r = 9.0;
    let dx = 2.0 * r / n as f64;
    for xi in [[0.0, 0.0], [1.0, -0.5], [2.5, 1.5]] {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                let x = [-r + (a as f64 + 0.5) * dx, -r + (b as f64 + 0.5) * dx];
                acc += Complex64::from_polar(t.value(x), -(x[0] * xi[0] + x[1] * xi[1]));
            }
        }
        let q = acc * dx * dx / (2.0 * PI);
        assert!((q - t.ft(xi)).norm() < 1e-12, "{xi:?}");
    }
}

#[test]
fn gaussian_inner_matches_frequency_side() {
    let a = GaussianTerm::new(1.0, [[1.0, 0.2], [0.0, 0.7]], [0.3, -0.1]).unwrap();
    let b = GaussianTerm::new(-0.5, [[0.6, 0.0], [0.3, 1.1]], [-0.4, 0.2]).unwrap();
    let n = 500;
    let r = 14.0;
    let dx = 2.0 * r / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            let xi = [-r + (i as f64 + 0.5) * dx, -r + (k as f64 + 0.5) * dx];
            acc += a.ft(xi) * b.ft(xi).conj();
        }
    }
    let q = acc.re * dx * dx;
    assert!((q - gaussian_inner(&a, &b)).abs() < 1e-12);
    let m = GaussianMixture::new(vec![a, b]);
    assert!((m.norm().powi(2) - m.inner(&m)).abs() < 1e-14);
}

#[test]
fn lattice_counts() {
    assert_eq!(lattice_points(1.0).len(), 9);
    for i in 0..60 {
        let h = 0.2 + i as f64 * 0.03;
        let n = lattice_points(h).len() as f64;
        assert!(n <= 36.0 * h.powi(-4), "h={h}: {n}");
    }
}

#[test]
fn stencil_order_two() {
    let s = make_stencil(2, 0.45).unwrap();
    let c: Vec<f64> = s.coefficients.iter().map(|c| c.re).collect();
    assert_eq!(c, vec![-0.25, 0.5, -0.25]);
    let s3 = make_stencil(3, 1.0).unwrap();
    // (2i)^-3 = i/8
    assert!((s3.coefficients[0] - Complex64::new(0.0, -0.125)).norm() < 1e-16);
    assert!(make_stencil(0, 1.0).is_err());
    assert!(make_stencil(2, 0.0).is_err());
}

#[test]
fn budget_to_h_examples() {
    let c = cfg();
    assert!((budget_to_h(36, 0, &c).unwrap() - 1.0).abs() < 1e-15);
    assert!((budget_to_h(108, 5, &c).unwrap() - 1.0).abs() < 1e-15);
    assert!(matches!(budget_to_h(2, 4, &c), Err(gmix::Error::BudgetTooSmall { .. })));
    assert!(budget_to_h(0, 0, &c).is_err());
}

#[test]
fn deconvolution_matches_oracle() {
    let f = SpectralFunction::single(Frame::default(), Atom::Generator { j: 0, dilation: 4.0 });
    let pts = [[0.0, 0.0], [1.0, 0.5], [-2.0, 3.0], [4.5, -1.0]];
    let s = deconvolve_samples(&f, &pts, &QuadratureConfig::default()).unwrap();
    for (p, v) in pts.iter().zip(&s) {
        let o = deconvolution_oracle(4.0, *p);
        assert!((v - o).abs() < 1e-10 * o.abs().max(1.0), "{p:?}: {v} vs {o}");
    }
    let g = SpectralFunction::single(Frame::default(), Atom::Gaussian(GaussianTerm::standard()));
    assert!(matches!(
        deconvolve_samples(&g, &pts, &QuadratureConfig::default()),
        Err(gmix::Error::UnboundedBand)
    ));
}

#[test]
fn truncated_weights_match_oracle() {
    let c = cfg();
    let f = SpectralFunction::single(Frame::default(), Atom::Generator { j: 0, dilation: 4.0 });
    let m = truncated_scheme(&f, 1.0, &c).unwrap();
    assert_eq!(m.len(), 9);
    for t in &m.terms {
        assert_eq!(t.map, IDENTITY);
        let r = t.center[0].hypot(t.center[1]);
        let expect = deconvolution_oracle(4.0, t.center) * c.sigma(r) / (2.0 * PI);
        assert!((t.weight - expect).abs() < 1e-10 * expect.abs().max(1e-3));
    }
}

#[test]
fn vm_scheme_factors_through_symbol() {
    let c = cfg();
    let s = c.dilation();
    assert!((s - 2f64.sqrt() * SUPPORT_B).abs() < 1e-12);
    let f = SpectralFunction::single(Frame::default(), Atom::Generator { j: 4, dilation: s });
    let h = 0.8;
    let vm = vm_scheme(&f, h, &c).unwrap();
    let plain = truncated_scheme(&f, h, &c).unwrap();
    assert_eq!(vm.len() % 3, 0);
    assert!(vm.len() <= 3 * lattice_points(h).len());
    assert!(plain.len() <= lattice_points(h).len());
    let stencil = c.stencil().unwrap();
    // middle tap has coefficient 1/2 and no shift
    let base: Vec<([f64; 2], f64)> = vm.terms.chunks(3).map(|g| (g[1].center, g[1].weight / 0.5)).collect();
    let peak = (0..200)
        .map(|i| vm.ft([0.02 * i as f64 - 2.0, 0.3]).norm())
        .fold(0.0, f64::max);
    let mut rng = Pcg64::seed_from_u64(11);
    for _ in 0..20 {
        let xi = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, w) in &base {
            acc += Complex64::from_polar(*w, -(p[0] * xi[0] + p[1] * xi[1]));
        }
        let expect = acc * stencil.symbol_exact(xi[0]) * phi_hat(xi);
        assert!((vm.ft(xi) - expect).norm() <= 1e-10 * peak.max(1e-300));
    }
    for i in 0..1000 {
        let v = vm.ft([0.0, -5.0 + 0.01 * i as f64]).norm();
        assert!(v <= 1e-14 * peak, "{v}");
    }
}

#[test]
fn kappa_misconfiguration() {
    let c = SchemeConfig {
        kappa: Some(1e-3),
        ..cfg()
    };
    let f = SpectralFunction::single(Frame::default(), Atom::Generator { j: 4, dilation: c.dilation() });
    let r = vm_scheme(&f, 1.0, &c);
    assert!(matches!(r, Err(gmix::Error::SymbolTooSmall(_))), "{:?}", r.map(|m| m.len()));
}

#[test]
fn generator_budgets() {
    let c = cfg();
    let g = approximate_generator(4, 108, &c).unwrap();
    assert!(g.len() <= 108);
    let g0 = approximate_generator(0, 36, &c).unwrap();
    assert!(g0.len() <= 36);
    let l = g0.terms[0].map;
    assert!(g0.terms.iter().all(|t| t.map == l));
    assert_eq!(l[0][1], 0.0);
    assert_eq!(l[0][0], l[1][1]);
    let c0 = approximate_curvelet(&CurveletIndex::new(0, 0, [0, 0]).unwrap(), 36, &c).unwrap();
    assert_eq!(c0, g0);
}

#[test]
fn mixture_ft_matches_direct_sum() {
    let c = cfg();
    let m = approximate_curvelet(&CurveletIndex::new(4, 1, [2, 3]).unwrap(), 108, &c).unwrap();
    let mut rng = Pcg64::seed_from_u64(5);
    for _ in 0..20 {
        let xi = [rng.gen_range(-80.0..80.0), rng.gen_range(-80.0..80.0)];
        let direct: Complex64 = m.terms.iter().map(|t| ft_oracle(t.weight, t.map, t.center, xi)).sum();
        let got = m.ft(xi);
        assert!((got - direct).norm() <= 1e-10 * direct.norm().max(1e-3));
    }
}

#[test]
fn error_is_unitarily_invariant() {
    let c = cfg();
    let q = QuadratureConfig::default();
    let frame = Frame::default();
    let idx = CurveletIndex::new(2, 1, [1, -1]).unwrap();
    let gen = approximate_generator(2, 36, &c).unwrap();
    let cur = approximate_curvelet(&idx, 36, &c).unwrap();
    let e_gen = l2_distance(
        &SpectralFunction::from_mixture(frame, &gen),
        &SpectralFunction::single(frame, Atom::Generator { j: 2, dilation: 1.0 }),
        &q,
    )
    .unwrap();
    let e_cur = l2_distance(
        &SpectralFunction::from_mixture(frame, &cur),
        &SpectralFunction::single(frame, Atom::Curvelet(idx)),
        &q,
    )
    .unwrap();
    assert!((e_gen - e_cur).abs() <= 1e-8 * e_gen, "{e_gen} vs {e_cur}");
}

#[test]
fn vanishing_numerator_on_axis() {
    let c = cfg();
    let g = GeneratorApprox::build(5, 108, &c).unwrap();
    for i in 0..100 {
        let y = -0.8 + 0.016 * i as f64;
        assert!(g.error_ft_normalized([0.0, y]).norm() <= 1e-15);
    }
    assert!(generator_error_weighted(5, 108, [0.0, 0.3], &c).unwrap().is_finite());
}
