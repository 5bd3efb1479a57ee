use parafeyn::fixtures;
use parafeyn::integration::*;
use parafeyn::moduli::ModuliConfig;
use parafeyn::renormalization::{bare_integrand, RenormScheme};
use parafeyn::{EdgeSet, KinematicConfig, Rational};

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn kin(d: i64, legs: u32, masses: &[f64], s: f64) -> KinematicConfig {
    let mut k = KinematicConfig::new(r(d), legs);
    for (c, &m) in masses.iter().enumerate() {
        k.set_mass(c as u32 + 1, m).unwrap();
    }
    for mask in 1u32..(1 << legs.saturating_sub(1)) {
        let subset: Vec<u32> = (1..legs).filter(|l| mask & (1 << (l - 1)) != 0).collect();
        k.set_invariant(&subset, s * (1.0 + 0.37 * mask as f64)).unwrap();
    }
    k
}

fn mc(samples: u64, seed: u64) -> McOptions {
    McOptions { samples, seed, ..Default::default() }
}

/// Composite Simpson on [0, 1].
fn simpson(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let mut acc = f(0.0) + f(1.0);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn constants_integrate_to_volumes() {
    let c = FnIntegrand { n_vars: 3, f: |_: &[f64]| 1.0 };
    let q = simplex_integrate_quad(&c, &QuadOptions::default()).unwrap();
    assert!((q.value - 0.5).abs() < 1e-14);
    let m = simplex_integrate_mc(&c, &mc(1000, 1)).unwrap();
    assert!((m.value - 0.5).abs() < 1e-14);
    let c4 = FnIntegrand { n_vars: 4, f: |_: &[f64]| 6.0 };
    assert!((simplex_integrate_quad(&c4, &QuadOptions::default()).unwrap().value - 1.0).abs() < 1e-14);
}

#[test]
fn bubble_two_dimensions() {
    let g = fixtures::bubble();
    let f = bare_integrand::<f64>(&g, &kin(2, 2, &[1.0, 1.0], 0.0)).unwrap();
    let m = simplex_integrate_mc(&f, &mc(1_000_000, 4)).unwrap();
    assert!((m.value - 1.0).abs() <= 3.0 * m.error.max(1e-15));
    let q = simplex_integrate_quad(&f, &QuadOptions { max_depth: 14, ..Default::default() }).unwrap();
    assert!((q.value - 1.0).abs() < 1e-6);
    // generic masses and momentum against a one-dimensional Simpson oracle
    let (m1, m2, s) = (0.7f64, 1.9f64, 2.3f64);
    let mut k = KinematicConfig::new(r(2), 2).with_mass(1, m1).unwrap().with_mass(2, m2).unwrap();
    k.set_invariant(&[1], s).unwrap();
    let f = bare_integrand::<f64>(&g, &k).unwrap();
    let exact = simpson(|u| 1.0 / (s * u * (1.0 - u) + (m1 * m1 * u + m2 * m2 * (1.0 - u))), 20_000);
    let q = simplex_integrate_quad(&f, &QuadOptions::default()).unwrap();
    assert!((q.value - exact).abs() < 1e-9 * exact, "{} {exact}", q.value);
    let m = simplex_integrate_mc(&f, &mc(200_000, 9)).unwrap();
    assert!((m.value - exact).abs() < 3.0 * m.error);
}

#[test]
fn triangle_mc_and_quad_agree() {
    let f = bare_integrand::<f64>(&fixtures::triangle(), &kin(4, 3, &[1.0, 1.0, 1.0], 1.0)).unwrap();
    let q = simplex_integrate_quad(&f, &QuadOptions::default()).unwrap();
    let m = simplex_integrate_mc(&f, &mc(400_000, 12)).unwrap();
    assert!(m.agrees_with(&q, 3.0), "{m:?} {q:?}");
}

#[test]
fn affine_chart_consistency() {
    let opts = QuadOptions { max_depth: 14, ..Default::default() };
    let bubble = bare_integrand::<f64>(&fixtures::bubble(), &kin(2, 2, &[1.0, 0.4], 1.1)).unwrap();
    let triangle = bare_integrand::<f64>(&fixtures::triangle(), &kin(4, 3, &[1.0, 1.0, 1.0], 1.0)).unwrap();
    for f in [&bubble, &triangle] {
        let reference = simplex_integrate_quad(f, &opts).unwrap().value;
        for affine in 0..f.graph.n_edges() {
            let a = affine_integrate_quad(f, affine, &opts).unwrap().value;
            assert!((a - reference).abs() <= 1e-9 * reference.abs(), "{affine}: {a} vs {reference}");
        }
    }
}

#[test]
fn seed_determinism_across_workers() {
    let f = bare_integrand::<f64>(&fixtures::triangle(), &kin(4, 3, &[1.0, 0.5, 2.0], 0.8)).unwrap();
    let one = simplex_integrate_mc(&f, &McOptions { jobs: Some(1), ..mc(50_000, 77) }).unwrap();
    let four = simplex_integrate_mc(&f, &McOptions { jobs: Some(4), ..mc(50_000, 77) }).unwrap();
    assert_eq!(one.value.to_bits(), four.value.to_bits());
    assert_eq!(one.error.to_bits(), four.error.to_bits());
    let other = simplex_integrate_mc(&f, &mc(50_000, 78)).unwrap();
    assert_ne!(one.value, other.value);
    let q1 = simplex_integrate_quad(&f, &QuadOptions { jobs: Some(1), ..Default::default() }).unwrap();
    let q3 = simplex_integrate_quad(&f, &QuadOptions { jobs: Some(3), ..Default::default() }).unwrap();
    assert_eq!(q1.value.to_bits(), q3.value.to_bits());
}

#[test]
fn linearity() {
    let f = |x: &[f64]| 1.0 / (x[0] + 2.0 * x[1] + 0.5 * x[2]).powi(3);
    let g = |x: &[f64]| x[0] * x[1] / (x[0] + x[1] + x[2]).powi(5);
    let (a, b) = (2.5, -0.75);
    let opts = mc(100_000, 21);
    let fi = simplex_integrate_mc(&FnIntegrand { n_vars: 3, f }, &opts).unwrap();
    let gi = simplex_integrate_mc(&FnIntegrand { n_vars: 3, f: g }, &opts).unwrap();
    let hi = simplex_integrate_mc(&FnIntegrand { n_vars: 3, f: |x: &[f64]| a * f(x) + b * g(x) }, &opts).unwrap();
    // same samples: linear up to rounding
    assert!((hi.value - (a * fi.value + b * gi.value)).abs() < 1e-12);
    let q = |h: &(dyn Fn(&[f64]) -> f64 + Sync)| simplex_integrate_quad(&FnIntegrand { n_vars: 3, f: h }, &QuadOptions::default()).unwrap().value;
    let lhs = q(&|x: &[f64]| a * f(x) + b * g(x));
    assert!((lhs - (a * q(&f) + b * q(&g))).abs() < 1e-8);
}

#[test]
fn log_singularity_converges_with_depth() {
    // −ln(u) on the unit interval, written projectively: exact value 1
    let f = FnIntegrand { n_vars: 2, f: |x: &[f64]| -(x[0] / (x[0] + x[1])).ln() / (x[0] + x[1]).powi(2) };
    let errors: Vec<f64> = [4u32, 8, 12, 16]
        .iter()
        .map(|&depth| {
            let opts = QuadOptions { max_depth: depth, rel_tol: 1e-12, ..Default::default() };
            let v = match simplex_integrate_quad(&f, &opts) {
                Ok(r) => r.value,
                Err(IntegrationError::NotConverged { value, .. }) => value,
                Err(e) => panic!("{e}"),
            };
            (v - 1.0).abs()
        })
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    assert!(errors[3] < 1e-6, "{errors:?}");
}

#[test]
fn divergent_graphs_refused() {
    let err = feynman_integral(&fixtures::dunce_cap(), &kin(4, 4, &[1.0; 4], 1.0), &IntegrationMethod::default()).unwrap_err();
    match err {
        IntegrationError::Divergent { subgraphs } => assert_eq!(subgraphs, vec![EdgeSet::from([3, 4])]),
        other => panic!("{other}"),
    }
    let ok = feynman_integral(&fixtures::bubble(), &kin(2, 2, &[1.0, 1.0], 0.0), &IntegrationMethod::Quadrature(QuadOptions::default())).unwrap();
    assert!((ok.value - 1.0).abs() < 1e-9);
}

#[test]
fn amplitude_one_loop_two_legs() {
    let (m1, m2, mu, s) = (1.4f64, 0.6f64, 1.0f64, 0.8f64);
    let point = KinematicConfig::new(r(2), 2).with_mass(1, mu).unwrap().with_mass(2, mu).unwrap().with_invariant(&[1], s).unwrap();
    let scheme = RenormScheme::new(point.clone(), r(2)).unwrap();
    let k = KinematicConfig::new(r(2), 2).with_mass(1, m1).unwrap().with_mass(2, m2).unwrap().with_invariant(&[1], s).unwrap();
    let quad = IntegrationMethod::Quadrature(QuadOptions::default());
    let a = amplitude(1, 2, &scheme, &k, &quad, &ModuliConfig::default()).unwrap();
    assert_eq!(a.per_cell.len(), 3);
    let bubble = |ma: f64, mb: f64| simpson(|u| 1.0 / (s * u * (1.0 - u) + ma * ma * u + mb * mb * (1.0 - u)), 20_000);
    let expected = (m1 * m1 / (mu * mu)).ln() + (m2 * m2 / (mu * mu)).ln() + bubble(m1, m2) - bubble(mu, mu);
    assert!((a.value - expected).abs() < 1e-8, "{} vs {expected}", a.value);
    let zero = amplitude(1, 2, &scheme, &point, &quad, &ModuliConfig::default()).unwrap();
    assert_eq!(zero.value, 0.0);
    let empty = amplitude(1, 0, &scheme, &k, &quad, &ModuliConfig::default()).unwrap();
    assert!(empty.per_cell.is_empty());
    assert_eq!(empty.value, 0.0);
}

#[test]
fn amplitude_refuses_non_log_cells() {
    let point = kin(4, 2, &[1.0; 6], 1.0);
    let scheme = RenormScheme::new(point.clone(), r(4)).unwrap();
    let err = amplitude(2, 2, &scheme, &point, &IntegrationMethod::default(), &ModuliConfig::default()).unwrap_err();
    assert!(matches!(err, IntegrationError::NonLogarithmicCells { .. }), "{err}");
}
