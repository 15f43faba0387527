//! Globally adaptive Gauss–Kronrod (7/15) integration on finite intervals.
//!
//! Unit-interval integrals are truncated to `[tail_eps, 1 - tail_eps]`; the
//! caller owns any tail correction. Real-line integrals take finite clip
//! points only. Node placement is deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerances shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Quantile-level truncation for unit-interval integrals.
    pub tail_eps: f64,
    /// Maximum number of bisections of any initial panel.
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-9,
            rel_tol: 1e-8,
            tail_eps: 1e-7,
            max_depth: 40,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.abs_tol) || !positive(self.rel_tol) {
            return Err(Error::domain("abs_tol and rel_tol must be > 0"));
        }
        if !positive(self.tail_eps) || self.tail_eps >= 0.5 {
            return Err(Error::domain("tail_eps must lie in (0, 0.5)"));
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// Probability mass cut off by the tail truncation (0 for line integrals).
    pub truncated_mass: f64,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
    centre: f64,
    /// Integrand at `a` / `b` when known to be the one-sided limit.
    f_a: Option<f64>,
    f_b: Option<f64>,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    // Largest error first; ties broken by position for determinism.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

struct Estimate {
    value: f64,
    error: f64,
    centre: f64,
    /// Values at the three outermost nodes next to `a` and next to `b`.
    near_a: [f64; 3],
    near_b: [f64; 3],
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Estimate> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc;
    let mut fv = [(0.0, 0.0); 7];
    {
        let mut eval = |x: f64| {
            let y = f(x);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::Evaluation { at: x })
            }
        };
        fc = eval(centre)?;
        for (j, slot) in fv.iter_mut().enumerate() {
            let dx = half * XGK[j];
            *slot = (eval(centre - dx)?, eval(centre + dx)?);
        }
    }

    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let value = kronrod * half;
    res_abs *= half.abs();
    // Inflated raw Kronrod-Gauss difference. QUADPACK's (200 e / asc)^1.5
    // rescaling is too optimistic when a kink sits between nodes.
    let mut err = 4.0 * ((kronrod - gauss) * half).abs();
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Estimate {
        value,
        error: err,
        centre: fc,
        near_a: [fv[0].0, fv[1].0, fv[2].0],
        near_b: [fv[0].1, fv[1].1, fv[2].1],
    })
}

/// Error bound for the sliver between an integration limit and the
/// outermost node, where no node can see a kink.
///
/// Compares `f(limit)` with the quadratic through the three outermost nodes,
/// scaled by the sliver width. Zero when `f(limit)` is not finite.
fn sliver_error(f_limit: f64, near: &[f64; 3], half: f64) -> f64 {
    if !f_limit.is_finite() {
        return 0.0;
    }
    let d = [1.0 - XGK[0], 1.0 - XGK[1], 1.0 - XGK[2]];
    let mut extrapolated = 0.0;
    for i in 0..3 {
        let mut w = 1.0;
        for j in 0..3 {
            if i != j {
                w *= d[j] / (d[j] - d[i]);
            }
        }
        extrapolated += w * near[i];
    }
    d[0] * half.abs() * (f_limit - extrapolated).abs()
}

/// Relative distance of a breakpoint probe from the panel edge.
const PROBE_OFFSET: f64 = 1.0 / (1u64 << 30) as f64;

/// Cap on bisections per call, on top of the depth limit.
const MAX_SUBDIVISIONS: usize = 20_000;

fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    let mut edges = vec![lo];
    let mut interior: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x.is_finite() && x > lo && x < hi)
        .collect();
    interior.sort_by(f64::total_cmp);
    interior.dedup();
    edges.extend(interior);
    edges.push(hi);

    // Edge values are known at the outer limits and at every bisection point
    // (the parent's centre node). At a caller breakpoint the integrand may
    // jump, so each side gets its own one-sided probe just inside the panel.
    let estimate = |f: &mut F, a: f64, b: f64, f_a: Option<f64>, f_b: Option<f64>| {
        gk15(f, a, b).map(|e| {
            let half = 0.5 * (b - a);
            let sliver_a = f_a.map_or(0.0, |fa| sliver_error(fa, &e.near_a, half));
            let sliver_b = f_b.map_or(0.0, |fb| sliver_error(fb, &e.near_b, half));
            Panel {
                a,
                b,
                value: e.value,
                error: e.error + sliver_a + sliver_b,
                depth: 0,
                centre: e.centre,
                f_a,
                f_b,
            }
        })
    };

    let mut evaluations = 0usize;
    let mut probe = |f: &mut F, x: f64| {
        evaluations += 1;
        let y = f(x);
        y.is_finite().then_some(y)
    };
    let mut initial = Vec::with_capacity(edges.len() - 1);
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let delta = (b - a) * PROBE_OFFSET;
        let f_a = probe(&mut f, if a == lo { a } else { a + delta });
        let f_b = probe(&mut f, if b == hi { b } else { b - delta });
        initial.push((a, b, f_a, f_b));
    }

    let mut heap = BinaryHeap::with_capacity(edges.len() * 2);
    for (a, b, f_a, f_b) in initial {
        heap.push(estimate(&mut f, a, b, f_a, f_b)?);
        evaluations += 15;
    }

    // Panels that may no longer be split.
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    let mut splits = 0usize;

    loop {
        let (value, error) = heap.iter().fold((frozen_value, frozen_error), |(v, e), p| {
            (v + p.value, e + p.error)
        });
        if error <= cfg.tolerance(value) {
            return Ok(QuadResult {
                value,
                error_estimate: error,
                evaluations,
                truncated_mass: 0.0,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::Convergence {
                value,
                estimate: error,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        let splittable = worst.a < mid && mid < worst.b;
        if worst.depth >= cfg.max_depth || splits >= MAX_SUBDIVISIONS || !splittable {
            if splits >= MAX_SUBDIVISIONS {
                return Err(Error::Convergence {
                    value,
                    estimate: error,
                });
            }
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        splits += 1;
        let f_mid = Some(worst.centre);
        let mut left = estimate(&mut f, worst.a, mid, worst.f_a, f_mid)?;
        let mut right = estimate(&mut f, mid, worst.b, f_mid, worst.f_b)?;
        evaluations += 30;
        // A kink hidden from the parent's nodes shows up as a disagreement
        // between the parent and its halves.
        let discrepancy = (worst.value - left.value - right.value).abs();
        for child in [&mut left, &mut right] {
            child.error = child.error.max(discrepancy);
            child.depth = worst.depth + 1;
        }
        heap.push(left);
        heap.push(right);
    }
}

/// Integrates `f` over `[tail_eps, 1 - tail_eps]`.
pub fn integrate_unit<F: FnMut(f64) -> f64>(f: F, cfg: &QuadConfig) -> Result<QuadResult> {
    integrate_unit_with_breaks(f, &[], cfg)
}

/// [`integrate_unit`] with the initial panels split at `breaks` (jumps or
/// kinks of the integrand).
pub fn integrate_unit_with_breaks<F: FnMut(f64) -> f64>(
    f: F,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    let eps = cfg.tail_eps;
    let mut out = adaptive(f, eps, 1.0 - eps, breaks, cfg)?;
    out.truncated_mass = 2.0 * eps;
    Ok(out)
}

/// Integrates `f` over the finite interval `[lo, hi]`.
///
/// Infinite endpoints are rejected: callers clip the line first.
pub fn integrate_line<F: FnMut(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    integrate_line_with_breaks(f, lo, hi, &[], cfg)
}

pub fn integrate_line_with_breaks<F: FnMut(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!(
            "integration bounds [{lo}, {hi}] must be finite; clip infinite endpoints first"
        )));
    }
    if lo >= hi {
        return Err(Error::domain(format!(
            "empty interval: lo = {lo} >= hi = {hi}"
        )));
    }
    adaptive(f, lo, hi, breaks, cfg)
}
