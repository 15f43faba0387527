//! W1 by the quantile integral, by the area between the CDFs, and as the
//! copula-parameterised expectation `E_C|X - Y|`, plus the dominance and
//! disjoint-support shortcuts and a brute-force oracle for small samples.

use serde::Serialize;

use crate::copulas::CopulaSpec;
use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_line_with_breaks, integrate_unit_with_breaks, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quantile,
    CdfArea,
    FastDominance,
    FastNoOverlap,
    EmpiricalSorted,
    BruteForce,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Quantile => "quantile",
            Method::CdfArea => "cdf_area",
            Method::FastDominance => "fast_dominance",
            Method::FastNoOverlap => "fast_no_overlap",
            Method::EmpiricalSorted => "empirical_sorted",
            Method::BruteForce => "brute_force",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct W1Result {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
    pub fast_path: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    XDominates,
    YDominates,
    Crossing,
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DominanceVerdict {
    pub relation: Relation,
    pub checked_levels: usize,
    /// Decided in closed form rather than on the level grid.
    pub exact: bool,
}

impl DominanceVerdict {
    pub fn is_strict(&self) -> bool {
        matches!(self.relation, Relation::XDominates | Relation::YDominates)
    }
}

/// Levels used by [`w1_auto`] for the dominance grid.
pub const DOMINANCE_LEVELS: usize = 257;

fn union_sorted(a: Vec<f64>, b: Vec<f64>) -> Vec<f64> {
    let mut v = a;
    v.extend(b);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// `∫_0^1 |F_X^{-1}(u) - F_Y^{-1}(u)| du`.
///
/// The integral runs over `[tail_eps, 1 - tail_eps]`; the two tails are added
/// back from closed-form partial means, assuming the quantiles do not cross
/// inside a tail.
pub fn w1_quantile(x: &Distribution, y: &Distribution, cfg: &QuadConfig) -> Result<W1Result> {
    cfg.validate()?;
    let breaks = union_sorted(x.quantile_breakpoints(), y.quantile_breakpoints());
    let quad = integrate_unit_with_breaks(
        |u| (x.quantile_at(u) - y.quantile_at(u)).abs(),
        &breaks,
        cfg,
    )?;

    let eps = cfg.tail_eps;
    let lower = (x.partial_mean_below(eps) - y.partial_mean_below(eps)).abs();
    let upper = (x.partial_mean_above(1.0 - eps) - y.partial_mean_above(1.0 - eps)).abs();
    // Rectangle-rule tails as a cross-check on the closed forms.
    let lower_rect = eps * (x.quantile_at(eps) - y.quantile_at(eps)).abs();
    let upper_rect = eps * (x.quantile_at(1.0 - eps) - y.quantile_at(1.0 - eps)).abs();
    let tail_error = (lower - lower_rect).abs() + (upper - upper_rect).abs();

    Ok(W1Result {
        value: quad.value + lower + upper,
        method: Method::Quantile,
        error_estimate: quad.error_estimate + tail_error,
        fast_path: false,
    })
}

/// Clip points for real-line integrals: finite support bounds where they
/// exist, otherwise the `tail_eps` quantiles.
fn clip_range(x: &Distribution, y: &Distribution, eps: f64) -> (f64, f64) {
    let lo_of = |d: &Distribution| {
        let s = d.support().lower;
        if s.is_finite() {
            s
        } else {
            d.quantile_at(eps)
        }
    };
    let hi_of = |d: &Distribution| {
        let s = d.support().upper;
        if s.is_finite() {
            s
        } else {
            d.quantile_at(1.0 - eps)
        }
    };
    (lo_of(x).min(lo_of(y)), hi_of(x).max(hi_of(y)))
}

/// `∫ (F_X + F_Y - 2 C(F_X, F_Y)) dt` over the clipped line plus tail terms.
/// Returns `(value, error_estimate)`.
fn vallender(
    x: &Distribution,
    y: &Distribution,
    copula: &CopulaSpec,
    cfg: &QuadConfig,
) -> Result<(f64, f64)> {
    cfg.validate()?;
    let (lo, hi) = clip_range(x, y, cfg.tail_eps);
    let body = if lo < hi {
        let breaks = union_sorted(x.cdf_breakpoints(), y.cdf_breakpoints());
        let integrand = |t: f64| {
            let (a, b) = (x.cdf_at(t), y.cdf_at(t));
            let v = a + b - 2.0 * copula.eval_at(a, b);
            if *copula == CopulaSpec::M {
                debug_assert!(
                    (v - (a - b).abs()).abs() <= 1e-12,
                    "comonotone integrand differs from |F_X - F_Y| at t = {t}"
                );
            }
            v
        };
        let q = integrate_line_with_breaks(integrand, lo, hi, &breaks, cfg)?;
        (q.value, q.error_estimate)
    } else {
        (0.0, 0.0)
    };

    // Outside [lo, hi] the integrand lies between |F_X - F_Y| and F_X + F_Y.
    let (mx_lo, my_lo) = (x.lower_partial_moment(lo), y.lower_partial_moment(lo));
    let (mx_hi, my_hi) = (x.upper_partial_moment(hi), y.upper_partial_moment(hi));
    let tail = |mx: f64, my: f64| -> (f64, f64) {
        let (floor, ceil) = ((mx - my).abs(), mx + my);
        match copula {
            CopulaSpec::M => (floor, 0.0),
            CopulaSpec::W => (ceil, 0.0),
            _ => (0.5 * (floor + ceil), 0.5 * (ceil - floor)),
        }
    };
    let (t_lo, e_lo) = tail(mx_lo, my_lo);
    let (t_hi, e_hi) = tail(mx_hi, my_hi);
    Ok((body.0 + t_lo + t_hi, body.1 + e_lo + e_hi))
}

/// Area between the two CDFs, written as the comonotone Vallender integrand
/// `F_X + F_Y - 2 min(F_X, F_Y)`.
pub fn w1_cdf_area(x: &Distribution, y: &Distribution, cfg: &QuadConfig) -> Result<W1Result> {
    let (value, error_estimate) = vallender(x, y, &CopulaSpec::M, cfg)?;
    Ok(W1Result {
        value,
        method: Method::CdfArea,
        error_estimate,
        fast_path: false,
    })
}

/// `E_C|X - Y|` when the dependence between `X` and `Y` is the copula `c`.
pub fn expected_distance(
    x: &Distribution,
    y: &Distribution,
    c: &CopulaSpec,
    cfg: &QuadConfig,
) -> Result<f64> {
    expected_distance_with_error(x, y, c, cfg).map(|(v, _)| v)
}

/// [`expected_distance`] with its error estimate.
pub fn expected_distance_with_error(
    x: &Distribution,
    y: &Distribution,
    c: &CopulaSpec,
    cfg: &QuadConfig,
) -> Result<(f64, f64)> {
    // validates rho
    c.eval(0.5, 0.5)?;
    vallender(x, y, c, cfg)
}

fn relation_from_signs(pos: bool, neg: bool) -> Relation {
    match (pos, neg) {
        (true, false) => Relation::XDominates,
        (false, true) => Relation::YDominates,
        (false, false) => Relation::Equal,
        (true, true) => Relation::Crossing,
    }
}

fn exact_relation(x: &Distribution, y: &Distribution) -> Option<Relation> {
    if let Some(c) = x.location_shift_from(y) {
        return Some(relation_from_signs(c > 0.0, c < 0.0));
    }
    match (x, y) {
        // quantiles are μ + σ z: different slopes always cross
        (Distribution::Normal { .. }, Distribution::Normal { .. }) => Some(Relation::Crossing),
        (Distribution::Uniform { a: a1, b: b1 }, Distribution::Uniform { a: a2, b: b2 }) => {
            let (d0, d1) = (a1 - a2, b1 - b2);
            Some(relation_from_signs(
                d0 > 0.0 || d1 > 0.0,
                d0 < 0.0 || d1 < 0.0,
            ))
        }
        (Distribution::Exponential { lambda: l1 }, Distribution::Exponential { lambda: l2 }) => {
            Some(relation_from_signs(l1 < l2, l1 > l2))
        }
        (Distribution::Empirical(_), Distribution::Empirical(_)) => {
            // both quantiles are constant between consecutive jump levels
            let mut levels = vec![0.0];
            levels.extend(union_sorted(
                x.quantile_breakpoints(),
                y.quantile_breakpoints(),
            ));
            levels.push(1.0);
            let (mut pos, mut neg) = (false, false);
            for w in levels.windows(2) {
                let u = 0.5 * (w[0] + w[1]);
                let d = x.quantile_at(u) - y.quantile_at(u);
                pos |= d > 0.0;
                neg |= d < 0.0;
            }
            Some(relation_from_signs(pos, neg))
        }
        _ => None,
    }
}

/// Compares the two quantile functions on `levels` interior levels and at
/// the support endpoints; same-family pairs are decided in closed form.
pub fn dominance_check(
    x: &Distribution,
    y: &Distribution,
    levels: usize,
) -> Result<DominanceVerdict> {
    if levels < 3 {
        return Err(Error::domain("dominance check needs at least 3 levels"));
    }
    if let Some(relation) = exact_relation(x, y) {
        return Ok(DominanceVerdict {
            relation,
            checked_levels: levels,
            exact: true,
        });
    }
    let (mut pos, mut neg) = (false, false);
    for i in 1..=levels {
        let u = i as f64 / (levels + 1) as f64;
        let d = x.quantile_at(u) - y.quantile_at(u);
        pos |= d > 0.0;
        neg |= d < 0.0;
    }
    let (sx, sy) = (x.support(), y.support());
    pos |= sx.lower > sy.lower || sx.upper > sy.upper;
    neg |= sx.lower < sy.lower || sx.upper < sy.upper;
    Ok(DominanceVerdict {
        relation: relation_from_signs(pos, neg),
        checked_levels: levels,
        exact: false,
    })
}

/// W1 with the closed-form shortcuts tried first: disjoint finite supports,
/// then first-order dominance, then the quantile integral.
pub fn w1_auto(x: &Distribution, y: &Distribution, cfg: &QuadConfig) -> Result<W1Result> {
    cfg.validate()?;
    let (sx, sy) = (x.support(), y.support());
    let mean_gap = (x.mean() - y.mean()).abs();
    if sx.finite && sy.finite && (sx.upper <= sy.lower || sy.upper <= sx.lower) {
        return Ok(W1Result {
            value: mean_gap,
            method: Method::FastNoOverlap,
            error_estimate: 0.0,
            fast_path: true,
        });
    }
    if dominance_check(x, y, DOMINANCE_LEVELS)?.is_strict() {
        return Ok(W1Result {
            value: mean_gap,
            method: Method::FastDominance,
            error_estimate: 0.0,
            fast_path: true,
        });
    }
    w1_quantile(x, y, cfg)
}

fn check_pair(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::domain("samples must be non-empty"));
    }
    if xs.len() != ys.len() {
        return Err(Error::domain(format!(
            "sample sizes differ ({} vs {}); use w1_quantile on empirical laws",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::domain("samples must be finite"));
    }
    Ok(())
}

/// Exact W1 between two equal-size samples: mean absolute gap between
/// matching order statistics.
pub fn w1_empirical_sorted(xs: &[f64], ys: &[f64]) -> Result<W1Result> {
    check_pair(xs, ys)?;
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let total: f64 = a.iter().zip(&b).map(|(p, q)| (p - q).abs()).sum();
    Ok(W1Result {
        value: total / a.len() as f64,
        method: Method::EmpiricalSorted,
        error_estimate: 0.0,
        fast_path: false,
    })
}

/// Largest sample size [`brute_force_w1`] accepts.
pub const BRUTE_FORCE_MAX: usize = 8;

/// Minimum over all `n!` permutation couplings of the mean absolute gap.
pub fn brute_force_w1(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pair(xs, ys)?;
    let n = xs.len();
    if n > BRUTE_FORCE_MAX {
        return Err(Error::domain(format!(
            "brute force refuses n = {n} > {BRUTE_FORCE_MAX}"
        )));
    }
    // Heap's algorithm, iterative
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let cost = |p: &[usize]| -> f64 { (0..n).map(|i| (xs[i] - ys[p[i]]).abs()).sum() };
    let mut best = cost(&perm);
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            best = best.min(cost(&perm));
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(best / n as f64)
}
