use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use w1copula::{
    brute_force_w1, expected_distance, w1_auto, w1_cdf_area, w1_empirical_sorted, w1_quantile,
    CopulaSpec, Distribution, Method, QuadConfig,
};

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

fn battery() -> Vec<(&'static str, Distribution, Distribution)> {
    vec![
        (
            "normal-uniform",
            Distribution::normal(15.0, 1.0).unwrap(),
            Distribution::uniform(12.0, 16.0).unwrap(),
        ),
        (
            "normal-shift",
            Distribution::normal(0.0, 1.0).unwrap(),
            Distribution::normal(3.0, 1.0).unwrap(),
        ),
        (
            "uniform-uniform",
            Distribution::uniform(0.0, 1.0).unwrap(),
            Distribution::uniform(0.0, 2.0).unwrap(),
        ),
        (
            "exp-uniform",
            Distribution::exponential(1.0).unwrap(),
            Distribution::uniform(0.0, 2.0).unwrap(),
        ),
        (
            "empirical-empirical",
            Distribution::empirical(vec![0.3, 1.7, 2.2, 5.0, -1.0]).unwrap(),
            Distribution::empirical(vec![1.0, 1.5, 4.0]).unwrap(),
        ),
    ]
}

fn all_copulas() -> Vec<CopulaSpec> {
    let mut v = vec![CopulaSpec::M, CopulaSpec::W, CopulaSpec::Pi];
    v.extend((-10..=10).map(|i| CopulaSpec::Gaussian {
        rho: i as f64 / 10.0,
    }));
    v
}

#[test]
fn routes_agree_on_battery() {
    for (name, x, y) in battery() {
        let q = w1_quantile(&x, &y, &cfg()).unwrap();
        let c = w1_cdf_area(&x, &y, &cfg()).unwrap();
        let gap = (q.value - c.value).abs();
        assert!(
            gap <= 1e-6 + q.error_estimate + c.error_estimate,
            "{name}: {q:?} {c:?}"
        );
        // the estimates are honest, so the routes meet far inside the budget
        assert!(gap <= 1e-8, "{name}: gap {gap:e}");
    }
}

#[test]
fn known_battery_values() {
    // closed forms: 3 for the shift, 1/2 for U(0,1) against U(0,2)
    let b = battery();
    let v = |i: usize| w1_quantile(&b[i].1, &b[i].2, &cfg()).unwrap().value;
    assert!((v(1) - 3.0).abs() < 1e-9);
    assert!((v(2) - 0.5).abs() < 1e-9);
    // -ln(1-u) = 2u at u* with 1 - u* = exp(-2u*); the integral splits there
    let mut u = 0.8;
    for _ in 0..100 {
        let g = -(1.0f64 - u).ln() - 2.0 * u;
        let dg = 1.0 / (1.0 - u) - 2.0;
        u -= g / dg;
    }
    // ∫_0^s -ln(1-u) du = (1-s) ln(1-s) + s
    let p = |s: f64| (1.0 - s) * (1.0 - s).ln() + s;
    let exact = (u * u - p(u)) + (1.0 - p(u)) - (1.0 - u * u);
    assert!((v(3) - exact).abs() < 1e-8, "{} vs {exact}", v(3));
}

#[test]
fn comonotone_copula_is_optimal_on_battery() {
    for (name, x, y) in battery() {
        let w1 = w1_quantile(&x, &y, &cfg()).unwrap().value;
        for c in all_copulas() {
            let e = expected_distance(&x, &y, &c, &cfg()).unwrap();
            assert!(e >= w1 - 1e-6, "{name} {c}: {e} < {w1}");
            if c == CopulaSpec::M {
                assert!((e - w1).abs() <= 1e-6, "{name}: {e} vs {w1}");
            }
        }
    }
}

#[test]
fn concordance_shrinks_the_area() {
    for (name, x, y) in battery() {
        let mut prev = f64::INFINITY;
        for i in -10..=10 {
            let rho = i as f64 / 10.0;
            let e = expected_distance(&x, &y, &CopulaSpec::Gaussian { rho }, &cfg()).unwrap();
            assert!(e <= prev + 1e-6, "{name} rho {rho}: {e} > {prev}");
            prev = e;
        }
        let w = expected_distance(&x, &y, &CopulaSpec::W, &cfg()).unwrap();
        let m = expected_distance(&x, &y, &CopulaSpec::M, &cfg()).unwrap();
        let pi = expected_distance(&x, &y, &CopulaSpec::Pi, &cfg()).unwrap();
        assert!(m <= pi + 1e-6 && pi <= w + 1e-6, "{name}");
    }
}

/// Values on a 1/8 grid keep every partial sum exact, so the two matchings
/// can be compared bit for bit.
fn dyadic_sample(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random_range(-400i32..=400) as f64 / 8.0)
        .collect()
}

#[test]
fn sorted_matching_equals_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..500 {
        let n = rng.random_range(1..=7);
        let xs = dyadic_sample(&mut rng, n);
        let ys = dyadic_sample(&mut rng, n);
        let sorted = w1_empirical_sorted(&xs, &ys).unwrap();
        assert_eq!(
            sorted.value,
            brute_force_w1(&xs, &ys).unwrap(),
            "{xs:?} {ys:?}"
        );
        assert_eq!(sorted.method, Method::EmpiricalSorted);
    }
}

#[test]
fn sorted_matching_on_generic_floats() {
    // without the dyadic grid only the summation order can differ
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..200 {
        let n = rng.random_range(1..=7);
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let ys: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let a = w1_empirical_sorted(&xs, &ys).unwrap().value;
        let b = brute_force_w1(&xs, &ys).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.max(1.0), "{a} vs {b}");
    }
}

#[test]
fn quantile_route_matches_sorted_matching() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let xs = dyadic_sample(&mut rng, n);
        let ys = dyadic_sample(&mut rng, n);
        let exact = w1_empirical_sorted(&xs, &ys).unwrap().value;
        let x = Distribution::empirical(xs).unwrap();
        let y = Distribution::empirical(ys).unwrap();
        let q = w1_quantile(&x, &y, &cfg()).unwrap().value;
        let c = w1_cdf_area(&x, &y, &cfg()).unwrap().value;
        assert!((q - exact).abs() < 1e-12, "{q} vs {exact}");
        assert!((c - exact).abs() < 1e-9, "{c} vs {exact}");
    }
}

#[test]
fn metric_axioms_on_empirical_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let law = |rng: &mut ChaCha8Rng| {
        let n = rng.random_range(1..=6);
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        Distribution::empirical(v).unwrap()
    };
    let w1 = |a: &Distribution, b: &Distribution| w1_quantile(a, b, &cfg()).unwrap().value;
    for _ in 0..200 {
        let (x, y, z) = (law(&mut rng), law(&mut rng), law(&mut rng));
        assert_eq!(w1(&x, &y), w1(&y, &x));
        assert_eq!(w1(&x, &x), 0.0);
        assert!(w1(&x, &z) <= w1(&x, &y) + w1(&y, &z) + 1e-12);
    }
}

fn shifted(d: &Distribution, c: f64) -> Distribution {
    match d {
        Distribution::Normal { mu, sigma } => Distribution::normal(mu + c, *sigma).unwrap(),
        Distribution::Uniform { a, b } => Distribution::uniform(a + c, b + c).unwrap(),
        Distribution::Empirical(e) => {
            Distribution::empirical(e.samples().iter().map(|v| v + c).collect()).unwrap()
        }
        Distribution::Exponential { .. } => unreachable!("not closed under shifts"),
    }
}

fn parametric() -> impl Strategy<Value = Distribution> {
    prop_oneof![
        (-5.0..5.0f64, 0.2..3.0f64).prop_map(|(m, s)| Distribution::normal(m, s).unwrap()),
        (-5.0..5.0f64, 0.1..4.0f64).prop_map(|(a, w)| Distribution::uniform(a, a + w).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_covariance(x in parametric(), y in parametric(), c in -50.0..50.0f64) {
        let base = w1_quantile(&x, &y, &cfg()).unwrap().value;
        let moved = w1_quantile(&shifted(&x, c), &shifted(&y, c), &cfg()).unwrap().value;
        prop_assert!((base - moved).abs() <= 1e-9, "{} vs {}", base, moved);
        let self_shift = w1_quantile(&shifted(&x, c), &x, &cfg()).unwrap().value;
        prop_assert!((self_shift - c.abs()).abs() <= 1e-9, "{} vs {}", self_shift, c);
    }

    #[test]
    fn fast_paths_agree_with_quantile_route(x in parametric(), y in parametric()) {
        let auto = w1_auto(&x, &y, &cfg()).unwrap();
        let q = w1_quantile(&x, &y, &cfg()).unwrap();
        prop_assert!((auto.value - q.value).abs() <= 1e-6, "{:?} vs {:?}", auto, q);
        prop_assert_eq!(auto.fast_path, auto.method != Method::Quantile);
    }

    #[test]
    fn fast_paths_fire_on_constructed_pairs(
        x in parametric(),
        c in 0.01..20.0f64,
        flip in any::<bool>(),
    ) {
        let (a, b) = if flip { (x.clone(), shifted(&x, c)) } else { (shifted(&x, c), x.clone()) };
        let auto = w1_auto(&a, &b, &cfg()).unwrap();
        prop_assert!(auto.fast_path);
        prop_assert!((auto.value - c).abs() <= 1e-9 * c.max(1.0));
    }

    #[test]
    fn value_is_nonnegative_and_vanishes_only_on_equal_laws(x in parametric(), y in parametric()) {
        let r = w1_quantile(&x, &y, &cfg()).unwrap();
        prop_assert!(r.value >= 0.0 && r.error_estimate >= 0.0);
        if x != y {
            prop_assert!(r.value > r.error_estimate);
        }
    }
}
