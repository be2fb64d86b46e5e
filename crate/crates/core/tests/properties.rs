use num_complex::Complex64;
use proptest::prelude::*;
use smale_lab::blaschke::{compose_pre, normalize, BlaschkeProduct, MobiusAutomorphism};
use smale_lab::polycore::{poly_roots, ComplexPolynomial};
use smale_lab::search::{estimate_kn, SamplerConfig, SearchConfig};
use smale_lab::smale::{general_quotients, smale_quotients, thm2_closed_s, thm4_closed_t};

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn point(max_radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max_radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Normalized products of degree 2 to 6 with nonzero zeros in `0.01 ≤ |z| ≤ 0.9`.
fn normalized_product() -> impl Strategy<Value = BlaschkeProduct> {
    (2usize..=6)
        .prop_flat_map(|n| prop::collection::vec((0.01..0.9f64, 0.0..std::f64::consts::TAU), n - 1))
        .prop_map(|pairs| {
            let mut zeros = vec![Complex64::new(0.0, 0.0)];
            zeros.extend(pairs.into_iter().map(|(r, t)| Complex64::from_polar(r, t)));
            BlaschkeProduct::from_zeros(zeros).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_invariance(b in normalized_product(), angle in 0.0..std::f64::consts::TAU) {
        let turn = Complex64::from_polar(1.0, angle);
        let rotated = BlaschkeProduct::from_zeros(b.zeros().iter().map(|z| z * turn).collect()).unwrap();
        let q = sorted(smale_quotients(&b).unwrap().values());
        let r = sorted(smale_quotients(&rotated).unwrap().values());
        prop_assert!(max_gap(&q, &r) <= 1e-10);
    }

    #[test]
    fn two_point_routes_agree(a in point(0.95), u in point(0.8)) {
        prop_assume!(a.norm() > 1e-3);
        let b = BlaschkeProduct::from_zeros(vec![Complex64::new(0.0, 0.0), a]).unwrap();
        let factorwise = smale_quotients(&b).unwrap().s;

        let beta = a.norm();
        let closed = (1.0 - (1.0 - beta * beta).sqrt()) / (beta * beta);

        // B ∘ φ with φ(u) = 0 is a product that is not normalized; its
        // general quotients at u are those of B.
        let moved = compose_pre(&b, &MobiusAutomorphism::centering(u).unwrap()).unwrap();
        let general = general_quotients(&moved, u).unwrap();

        prop_assert!((factorwise - closed).abs() <= 1e-10, "{factorwise} vs {closed}");
        prop_assert_eq!(general.len(), 1);
        prop_assert!((general[0] - closed).abs() <= 1e-10, "{} vs {closed}", general[0]);
        prop_assert!(closed > 0.5 && closed < 1.0);
    }

    #[test]
    fn polynomial_reconstruction(roots in prop::collection::vec(point(0.9), 1..=12)) {
        let p = ComplexPolynomial::from_roots(&roots);
        let found = poly_roots(&p, 1e-12).unwrap();
        let rebuilt = ComplexPolynomial::from_roots(&found.expanded());
        let scale = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (x, y) in p.coeffs().iter().zip(rebuilt.coeffs()) {
            prop_assert!((x - y).norm() <= 1e-8 * scale);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn normalization_invariance(
        pairs in prop::collection::vec(point(0.95), 2..=8),
        w in point(0.9),
    ) {
        let b = BlaschkeProduct::from_zeros(pairs).unwrap();
        prop_assume!(b.derivative(w).unwrap().norm() > 1e-6);
        let general = sorted(general_quotients(&b, w).unwrap());
        let normalized = normalize(&b, w).unwrap();
        let direct = sorted(smale_quotients(&normalized).unwrap().values());
        prop_assert!(max_gap(&general, &direct) <= 1e-9);
    }
}

#[test]
fn closed_forms_are_monotone() {
    let grid: Vec<f64> = (1..=50).map(|k| k as f64 / 51.0).collect();
    for n in 2..=8usize {
        let s: Vec<f64> = grid.iter().map(|&b| thm2_closed_s(n, b).unwrap()).collect();
        let t: Vec<f64> = grid.iter().map(|&a| thm4_closed_t(n, a).unwrap()).collect();
        assert!(
            s.windows(2).all(|w| w[0] < w[1]),
            "S not increasing for n = {n}"
        );
        assert!(
            t.windows(2).all(|w| w[0] < w[1]),
            "T not increasing for n = {n}"
        );
        assert!(s.iter().all(|&v| v > 0.0 && v < 1.0));
        assert!(t.iter().all(|&v| v > 1.0 / n as f64 && v < 1.0));
    }
}

#[test]
fn search_improves_with_budget() {
    let base = SearchConfig {
        restarts: 6,
        budget: 50,
        seed: 3,
        sampler: SamplerConfig::default(),
    };
    let mut last = f64::NEG_INFINITY;
    for budget in [50, 200, 800] {
        let r = estimate_kn(3, &SearchConfig { budget, ..base }).unwrap();
        assert!(
            r.best_value >= last,
            "budget {budget}: {} < {last}",
            r.best_value
        );
        last = r.best_value;
    }
}
