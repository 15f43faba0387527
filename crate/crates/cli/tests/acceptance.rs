//! Acceptance report: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use w1copula::quadrature::integrate_line;
use w1copula::{
    brute_force_w1, expected_distance, mc_expected_distance, w1_auto, w1_cdf_area,
    w1_empirical_sorted, w1_quantile, CopulaSpec, Distribution, Method, QuadConfig, FIGURE_RHOS,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

fn normal(m: f64, s: f64) -> Distribution {
    Distribution::normal(m, s).unwrap()
}

fn uniform(a: f64, b: f64) -> Distribution {
    Distribution::uniform(a, b).unwrap()
}

fn figure_pair() -> (Distribution, Distribution) {
    (normal(15.0, 1.0), uniform(12.0, 16.0))
}

fn battery() -> Vec<(Distribution, Distribution)> {
    vec![
        figure_pair(),
        (normal(0.0, 1.0), normal(3.0, 1.0)),
        (uniform(0.0, 1.0), uniform(0.0, 2.0)),
        (Distribution::exponential(1.0).unwrap(), uniform(0.0, 2.0)),
        (
            Distribution::empirical(vec![0.3, 1.7, 2.2, 5.0, -1.0]).unwrap(),
            Distribution::empirical(vec![1.0, 1.5, 4.0]).unwrap(),
        ),
    ]
}

fn supported_copulas() -> Vec<CopulaSpec> {
    let mut v = vec![CopulaSpec::M, CopulaSpec::W, CopulaSpec::Pi];
    v.extend((-10..=10).map(|i| CopulaSpec::Gaussian {
        rho: i as f64 / 10.0,
    }));
    v.extend(FIGURE_RHOS.iter().map(|&rho| CopulaSpec::Gaussian { rho }));
    v
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_w1copula"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn figure_ordering() -> Outcome {
    let out = cli(&["integrand", "normal:15,1", "uniform:12,16"]);
    if out.status.code() != Some(0) {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let text = String::from_utf8(out.stdout).unwrap();
    let area = |name: &str| -> f64 {
        let prefix = format!("#area,{name},");
        text.lines()
            .find_map(|l| l.strip_prefix(&prefix))
            .expect("area row")
            .parse()
            .unwrap()
    };
    // W first, then decreasing rho, then M: areas must not increase
    let mut rhos = FIGURE_RHOS.to_vec();
    rhos.sort_by(|a, b| b.total_cmp(a));
    let mut seq = vec![("w".to_string(), area("w"))];
    seq.extend(rhos.iter().rev().map(|r| {
        let n = format!("gaussian:{r}");
        let a = area(&n);
        (n, a)
    }));
    seq.push(("m".to_string(), area("m")));
    let worst = seq
        .windows(2)
        .map(|p| p[1].1 - p[0].1)
        .fold(f64::NEG_INFINITY, f64::max);
    let (m, w) = (area("m"), area("w"));
    let all: Vec<f64> = seq.iter().map(|s| s.1).collect();
    let min_ok = all.iter().all(|&a| a >= m - 1e-6);
    let max_ok = all.iter().all(|&a| a <= w + 1e-6);
    check(
        worst <= 1e-6 && min_ok && max_ok && m >= -1e-6,
        format!("area(m) = {m:.9}, area(w) = {w:.9}, largest increase along rho {worst:.2e}"),
    )
}

fn route_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    for (x, y) in battery() {
        let q = w1_quantile(&x, &y, &cfg()).map_err(|e| e.to_string())?;
        let c = w1_cdf_area(&x, &y, &cfg()).map_err(|e| e.to_string())?;
        worst = worst.max((q.value - c.value).abs());
    }
    check(
        worst <= 1e-6,
        format!("max |quantile - cdf_area| = {worst:.2e} over 5 pairs"),
    )
}

fn m_optimality() -> Outcome {
    let (mut worst_gap, mut m_gap) = (f64::INFINITY, 0.0f64);
    for (x, y) in battery() {
        let w1 = w1_quantile(&x, &y, &cfg())
            .map_err(|e| e.to_string())?
            .value;
        for c in supported_copulas() {
            let e = expected_distance(&x, &y, &c, &cfg()).map_err(|e| e.to_string())?;
            worst_gap = worst_gap.min(e - w1);
            if c == CopulaSpec::M {
                m_gap = m_gap.max((e - w1).abs());
            }
        }
    }
    check(
        worst_gap >= -1e-6 && m_gap <= 1e-6,
        format!("min E_C - W1 = {worst_gap:.2e}, |E_M - W1| <= {m_gap:.2e}"),
    )
}

fn dominance_shortcut() -> Outcome {
    let (x, y) = (normal(3.0, 1.0), normal(0.0, 1.0));
    let a = w1_auto(&x, &y, &cfg()).map_err(|e| e.to_string())?;
    let q = w1_quantile(&x, &y, &cfg()).map_err(|e| e.to_string())?;
    check(
        a.method == Method::FastDominance
            && (a.value - 3.0).abs() <= 1e-6
            && (a.value - q.value).abs() <= 1e-6,
        format!(
            "auto = {} via {}, quantile = {:.12}",
            a.value,
            a.method.as_str(),
            q.value
        ),
    )
}

fn disjoint_supports() -> Outcome {
    let (x, y) = (uniform(2.0, 3.0), uniform(0.0, 1.0));
    let a = w1_auto(&x, &y, &cfg()).map_err(|e| e.to_string())?;
    let mut detail = format!("auto = {} via {}", a.value, a.method.as_str());
    let mut ok = a.value == 2.0 && a.method == Method::FastNoOverlap;
    let copulas = [
        CopulaSpec::M,
        CopulaSpec::W,
        CopulaSpec::Pi,
        CopulaSpec::Gaussian { rho: 0.8 },
        CopulaSpec::Gaussian { rho: -0.8 },
    ];
    let mut worst: f64 = 0.0;
    for c in copulas {
        let e = mc_expected_distance(&x, &y, &c, 100_000, 42).map_err(|e| e.to_string())?;
        let dev = (e.mean - 2.0).abs();
        ok &= dev <= 3.0 * e.std_error;
        if e.std_error > 0.0 {
            worst = worst.max(dev / e.std_error);
        }
    }
    detail.push_str(&format!("; MC worst |mean - 2| = {worst:.2} std errors"));
    check(ok, detail)
}

/// Values on a 1/8 grid keep every sum exact.
fn dyadic(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random_range(-400i32..=400) as f64 / 8.0)
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = 0;
    for _ in 0..500 {
        let n = rng.random_range(1..=7);
        let (xs, ys) = (dyadic(&mut rng, n), dyadic(&mut rng, n));
        let s = w1_empirical_sorted(&xs, &ys)
            .map_err(|e| e.to_string())?
            .value;
        let b = brute_force_w1(&xs, &ys).map_err(|e| e.to_string())?;
        if s != b {
            mismatches += 1;
        }
    }
    check(
        mismatches == 0,
        format!("{mismatches} mismatches in 500 instances"),
    )
}

fn copula_axioms() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    let mut specs = vec![CopulaSpec::M, CopulaSpec::W, CopulaSpec::Pi];
    specs.extend([-1.0, -0.8, 0.0, 0.12, 0.64, 1.0].map(|rho| CopulaSpec::Gaussian { rho }));
    for c in specs {
        let r = c.verify_axioms(41).map_err(|e| e.to_string())?;
        worst = worst.max(r.max_violation());
        if !r.passed() || r.max_violation() > 1e-9 {
            failed.push(c.to_string());
        }
    }
    // independent 2-D cubature of the bivariate normal density over (-9, 0]^2
    let rho: f64 = 0.5;
    let k = 1.0 / (2.0 * std::f64::consts::PI * (1.0 - rho * rho).sqrt());
    let density = |s: f64, t: f64| {
        k * (-(s * s - 2.0 * rho * s * t + t * t) / (2.0 * (1.0 - rho * rho))).exp()
    };
    let tight = QuadConfig {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        ..QuadConfig::default()
    };
    let oracle = integrate_line(
        |t| {
            integrate_line(|s| density(s, t), -9.0, 0.0, &tight)
                .unwrap()
                .value
        },
        -9.0,
        0.0,
        &tight,
    )
    .map_err(|e| e.to_string())?
    .value;
    let value = CopulaSpec::Gaussian { rho }
        .eval(0.5, 0.5)
        .map_err(|e| e.to_string())?;
    let gap = (value - oracle).abs();
    check(
        failed.is_empty() && gap <= 1e-8,
        format!("max violation {worst:.2e}; C(0.5, 0.5) = {value:.15} vs cubature {oracle:.15}; failing: {failed:?}"),
    )
}

fn metric_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let law = |rng: &mut ChaCha8Rng| {
        let n = rng.random_range(1..=6);
        Distribution::empirical((0..n).map(|_| rng.random_range(-5.0..5.0)).collect()).unwrap()
    };
    let w1 = |a: &Distribution, b: &Distribution| w1_quantile(a, b, &cfg()).map(|r| r.value);
    let (mut sym, mut selfd, mut tri) = (0, 0, 0);
    for _ in 0..200 {
        let (x, y, z) = (law(&mut rng), law(&mut rng), law(&mut rng));
        let e = |r: w1copula::Result<f64>| r.map_err(|e| e.to_string());
        let (xy, yx, xx) = (e(w1(&x, &y))?, e(w1(&y, &x))?, e(w1(&x, &x))?);
        let (xz, yz) = (e(w1(&x, &z))?, e(w1(&y, &z))?);
        sym += (xy != yx) as usize;
        selfd += (xx != 0.0) as usize;
        tri += (xz > xy + yz + 1e-12) as usize;
    }
    check(
        sym + selfd + tri == 0,
        format!(
            "violations over 200 triples: symmetry {sym}, self-distance {selfd}, triangle {tri}"
        ),
    )
}

fn mc_consistency() -> Outcome {
    let (x, y) = figure_pair();
    let c = CopulaSpec::Gaussian { rho: 0.8 };
    let e = mc_expected_distance(&x, &y, &c, 100_000, 7).map_err(|e| e.to_string())?;
    let q = expected_distance(&x, &y, &c, &cfg()).map_err(|e| e.to_string())?;
    let z = (e.mean - q).abs() / e.std_error;
    check(
        z <= 4.0,
        format!(
            "MC {:.6} ± {:.1e}, quadrature {q:.9}, |z| = {z:.2}",
            e.mean, e.std_error
        ),
    )
}

fn determinism() -> Outcome {
    let args = [
        "certify",
        "normal:15,1",
        "uniform:12,16",
        "--n",
        "100000",
        "--seed",
        "7",
    ];
    let a = cli(&args);
    let b = cli(&args);
    check(
        a.status.code() == Some(0) && a.stdout == b.stdout && !a.stdout.is_empty(),
        format!(
            "two runs, {} bytes each, identical: {}",
            a.stdout.len(),
            a.stdout == b.stdout
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "figure ordering of integrand areas",
            figure_ordering,
            Some(Duration::from_secs(5)),
        ),
        (
            "quantile and CDF-area routes agree",
            route_equivalence,
            Some(Duration::from_secs(2)),
        ),
        ("comonotone copula is optimal", m_optimality, None),
        ("dominance shortcut", dominance_shortcut, None),
        ("disjoint-support shortcut", disjoint_supports, None),
        (
            "sorted matching equals brute force",
            oracle_equivalence,
            Some(Duration::from_secs(10)),
        ),
        ("copula axioms", copula_axioms, None),
        ("metric axioms", metric_axioms, None),
        ("Monte Carlo agrees with quadrature", mc_consistency, None),
        ("certify output is deterministic", determinism, None),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let over = limit.is_some_and(|l| took > l);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {:?} limit", limit.unwrap())),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} {status} {name}: {detail} [{:.2} s]",
            i + 1,
            took.as_secs_f64()
        );
    }
    println!("acceptance: {} of 10 passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
