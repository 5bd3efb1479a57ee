use parafeyn::compactified::{build_chart, charts, Flag};
use parafeyn::fixtures;
use parafeyn::integration::{Integrand, IntegrationMethod, McOptions, QuadOptions};
use parafeyn::power_counting::{divergence_forests, ForestOfDivergents};
use parafeyn::renormalization::*;
use parafeyn::{EdgeSet, KinematicConfig, Rational};
use proptest::prelude::*;

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Masses `m` on colours 1..=6 and a distinct positive value on every invariant.
fn kin(d: i64, legs: u32, m: f64, s: f64) -> KinematicConfig {
    let mut k = KinematicConfig::new(r(d), legs);
    for c in 1..=6 {
        k.set_mass(c, m).unwrap();
    }
    for mask in 1u32..(1 << legs.saturating_sub(1)) {
        let subset: Vec<u32> = (1..legs).filter(|l| mask & (1 << (l - 1)) != 0).collect();
        k.set_invariant(&subset, s * (1.0 + 0.1 * mask as f64)).unwrap();
    }
    k
}

fn mc(samples: u64, seed: u64) -> IntegrationMethod {
    IntegrationMethod::MonteCarlo(McOptions { samples, seed, ..Default::default() })
}

#[test]
fn renormalisation_point_gives_exact_zero() {
    for (g, legs, d) in [
        (fixtures::dunce_cap(), 4, 4),
        (fixtures::tadpole(1), 1, 2),
        (fixtures::dunce_with_bubble(), 2, 4),
        (fixtures::bubble(), 2, 2),
    ] {
        let point = kin(d, legs, 1.7, 0.9);
        let scheme = RenormScheme::new(point.clone(), r(d)).unwrap();
        let res = renormalised_integral(&g, &scheme, &point, &mc(10_000, 3)).unwrap();
        assert_eq!(res.result.value, 0.0);
        assert!(res.forests.iter().all(|f| f.value == 0.0));
    }
}

#[test]
fn tadpole_closed_form() {
    let g = fixtures::tadpole(2);
    for (m, m0) in [(1.0, 1.0), (2.0, 1.0), (0.3, 1.7), (5.0, 0.01)] {
        let scheme = RenormScheme::new(kin(2, 1, m0, 0.0), r(2)).unwrap();
        let res = renormalised_integral(&g, &scheme, &kin(2, 1, m, 0.0), &mc(100, 0)).unwrap();
        let expected = (m * m / (m0 * m0)).ln();
        assert!((res.result.value - expected).abs() < 1e-12, "{m} {m0}");
    }
}

#[test]
fn dunce_stable_under_sample_doubling() {
    let g = fixtures::dunce_cap();
    let scheme = RenormScheme::new(kin(4, 4, 1.0, 2.0), r(4)).unwrap();
    let k = kin(4, 4, 1.0, 1.0);
    let a = renormalised_integral(&g, &scheme, &k, &mc(1_000_000, 5)).unwrap().result.value;
    let b = renormalised_integral(&g, &scheme, &k, &mc(2_000_000, 5)).unwrap().result.value;
    assert!(a.is_finite() && b.is_finite());
    // agreement to three significant digits: half a unit in the third digit
    let unit = 10f64.powf(b.abs().log10().floor() - 2.0);
    assert!((a - b).abs() <= 0.5 * unit, "{a} vs {b}");
}

#[test]
fn dunce_quadrature_cross_check() {
    let g = fixtures::dunce_cap();
    let scheme = RenormScheme::new(kin(4, 4, 1.0, 2.0), r(4)).unwrap();
    let k = kin(4, 4, 1.0, 1.0);
    let m = renormalised_integral(&g, &scheme, &k, &mc(1_000_000, 11)).unwrap().result;
    let quad = IntegrationMethod::Quadrature(QuadOptions { max_depth: 8, rel_tol: 2e-3, ..Default::default() });
    let q = renormalised_integral(&g, &scheme, &k, &quad).unwrap().result;
    // MC variance is only log-finite here, so compare relatively
    assert!((m.value - q.value).abs() < 3e-3 * q.value.abs(), "{m:?} {q:?}");
}

#[test]
fn flipping_a_forest_sign() {
    let g = fixtures::dunce_cap();
    let scheme = RenormScheme::new(kin(4, 4, 1.0, 2.0), r(4)).unwrap();
    let k = kin(4, 4, 1.3, 0.5);
    let res = renormalised_integral(&g, &scheme, &k, &mc(50_000, 2)).unwrap();
    let f = renormalised_integrand::<f64>(&g, &scheme, &k).unwrap();
    let mut flipped = f.clone();
    flipped.terms[1].sign = -flipped.terms[1].sign;
    let opts = McOptions { samples: 50_000, seed: 2, ..Default::default() };
    let other = parafeyn::integration::simplex_integrate_mc(&flipped, &opts).unwrap();
    let expected = res.result.value - 2.0 * res.forests[1].value;
    assert!((other.value - expected).abs() < 1e-9 * (1.0 + expected.abs()), "{} {}", other.value, expected);
}

#[test]
fn forests_containing_the_graph_vanish() {
    let g = fixtures::dunce_with_bubble();
    let scheme = RenormScheme::new(kin(4, 2, 1.0, 1.0), r(4)).unwrap();
    let k = kin(4, 2, 2.0, 3.0);
    for f in divergence_forests(&g, r(4), true).unwrap() {
        let mut members = f.members().to_vec();
        members.push(g.edge_ids());
        let with_g = ForestOfDivergents::new(&g, members).unwrap();
        let t = forest_integrand::<f64>(&g, &with_g, &scheme, &k).unwrap();
        assert_eq!(t.eval(&[0.1, 0.2, 0.15, 0.25, 0.2, 0.1]), 0.0);
    }
}

#[test]
fn non_logarithmic_rejected() {
    let scheme = RenormScheme::new(kin(4, 2, 1.0, 1.0), r(4)).unwrap();
    let err = renormalised_integral(&fixtures::sunrise(), &scheme, &kin(4, 2, 1.0, 2.0), &mc(100, 0)).unwrap_err();
    assert!(matches!(err, RenormError::PowerCounting(_)), "{err}");
}

/// The Dunce chart with affine edge 1, flag {e3,e4} and marked edge 3.
fn dunce_chart() -> (parafeyn::Graph, parafeyn::compactified::Chart) {
    let g = fixtures::dunce_cap();
    let flag = Flag::new(&g, vec![EdgeSet::from([3, 4])]).unwrap();
    let chart = build_chart(&g, &flag, 1, &[3]).unwrap();
    (g, chart)
}

fn point(chart: &parafeyn::compactified::Chart, star: f64, rest: &[f64]) -> Vec<f64> {
    let mut it = rest.iter();
    chart.coordinates.iter().map(|&c| if c == chart.marked[0] { star } else { *it.next().unwrap() }).collect()
}

/// ψ̃ on the Dunce chart with x1 = 1, x2 = y0, x3 = y*, x4 = y*·w.
fn psi_tilde(y0: f64, star: f64, w: f64) -> f64 {
    star * w + y0 * (1.0 + w) + 1.0 + w
}

#[test]
fn dunce_chart_integrands_closed_form() {
    let (g, chart) = dunce_chart();
    assert_eq!(chart.coordinates, vec![2, 3, 4]);
    let k = kin(4, 4, 1.0, 1.0);
    let sub = local_subtracted_integrand::<f64>(&g, &chart, &k, r(4)).unwrap();
    let raw = chart_integrand::<f64>(&g, &chart, &k, r(4)).unwrap();
    for (y0, star, w) in [(0.2, 0.3, 0.7), (1.5, 0.05, 0.1), (0.4, 2.0, 0.4), (3.0, 1e-9, 2.0)] {
        let y = [y0, star, w];
        let bare = psi_tilde(y0, star, w).powi(-2) / star;
        let face = psi_tilde(y0, 0.0, w).powi(-2) / star;
        assert!((raw.eval(&y) - bare).abs() <= 1e-12 * bare);
        assert!((sub.eval(&y) - (bare - face)).abs() <= 1e-9 * bare.abs().max(1.0));
    }
    // the subtracted bracket vanishes on the face, leaving a finite limit
    let limit = -2.0 * psi_tilde(0.5, 0.0, 0.5).powi(-3) * 0.5;
    assert!((sub.eval(&[0.5, 1e-7, 0.5]) - limit).abs() < 1e-5);
    // empty flag: nothing to subtract
    let flagless = charts(&g, &Flag::empty());
    let plain = local_subtracted_integrand::<f64>(&g, &flagless[0], &k, r(4)).unwrap();
    let unsub = chart_integrand::<f64>(&g, &flagless[0], &k, r(4)).unwrap();
    let y = vec![0.3, 0.6, 0.9];
    assert_eq!(plain.eval(&y), unsub.eval(&y));
}

#[test]
fn local_subtraction_bounded_on_grid() {
    let (g, chart) = dunce_chart();
    let k = kin(4, 4, 1.0, 1.0);
    let sub = local_subtracted_integrand::<f64>(&g, &chart, &k, r(4)).unwrap();
    let raw = chart_integrand::<f64>(&g, &chart, &k, r(4)).unwrap();
    let grid = [0.1, 0.5, 1.0, 3.0];
    let max_at = |f: &ChartIntegrand<f64>, star: f64| {
        let mut m: f64 = 0.0;
        for &a in &grid {
            for &b in &grid {
                m = m.max(f.eval(&point(&chart, star, &[a, b])).abs());
            }
        }
        m
    };
    let sub_max: Vec<f64> = (1..=20).map(|j| max_at(&sub, 0.5f64.powi(j))).collect();
    let raw_max: Vec<f64> = (1..=20).map(|j| max_at(&raw, 0.5f64.powi(j))).collect();
    let (s, u) = (sub_max[19] / sub_max[18], raw_max[19] / raw_max[18]);
    assert!((s - 1.0).abs() < 0.1, "{s}");
    assert!((u - 2.0).abs() < 0.2, "{u}");
}

proptest! {
    #[test]
    fn renormalisation_point_integrand_vanishes(xs in proptest::collection::vec(0.01f64..1.0, 6), m in 0.1f64..3.0, s in 0.1f64..3.0) {
        let g = fixtures::dunce_with_bubble();
        let point = kin(4, 2, m, s);
        let scheme = RenormScheme::new(point.clone(), r(4)).unwrap();
        let f = renormalised_integrand::<f64>(&g, &scheme, &point).unwrap();
        prop_assert_eq!(f.eval(&xs), 0.0);
    }

    #[test]
    fn forest_terms_are_projective(xs in proptest::collection::vec(0.05f64..1.0, 4), lambda in 0.2f64..5.0) {
        // f_{G,F}(λx) = λ^{-N} f_{G,F}(x)
        let g = fixtures::dunce_cap();
        let scheme = RenormScheme::new(kin(4, 4, 1.0, 2.0), r(4)).unwrap();
        let f = renormalised_integrand::<f64>(&g, &scheme, &kin(4, 4, 1.5, 0.7)).unwrap();
        let scaled: Vec<f64> = xs.iter().map(|x| x * lambda).collect();
        for t in &f.terms {
            let (a, b) = (t.eval(&scaled), t.eval(&xs) * lambda.powi(-4));
            prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1e-12), "{} {}", a, b);
        }
    }
}
