//! Sampled integrand `F_X(t) + F_Y(t) - 2 C(F_X(t), F_Y(t))` on a uniform grid.

use std::cmp::Ordering;

use serde::Serialize;

use crate::copulas::CopulaSpec;
use crate::distributions::Distribution;
use crate::error::{Error, Result};

/// Quantile level that fixes the default plotting window.
pub const DEFAULT_WINDOW_LEVEL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrandCurve {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub copula: CopulaSpec,
    /// Trapezoidal sum of `values` over `t_grid`.
    pub area: f64,
}

/// Smallest window containing both laws between their
/// [`DEFAULT_WINDOW_LEVEL`] and `1 - DEFAULT_WINDOW_LEVEL` quantiles.
pub fn default_window(x: &Distribution, y: &Distribution) -> (f64, f64) {
    let p = DEFAULT_WINDOW_LEVEL;
    let lo = x.quantile_at(p).min(y.quantile_at(p));
    let hi = x.quantile_at(1.0 - p).max(y.quantile_at(1.0 - p));
    if lo < hi {
        (lo, hi)
    } else {
        // two equal point masses
        (lo - 1.0, hi + 1.0)
    }
}

/// Uniform grid of `grid` points from `t_lo` to `t_hi`, endpoints included.
pub fn uniform_grid(t_lo: f64, t_hi: f64, grid: usize) -> Result<Vec<f64>> {
    if grid < 2 {
        return Err(Error::domain("grid needs at least 2 points"));
    }
    if !(t_lo.is_finite() && t_hi.is_finite() && t_lo < t_hi) {
        return Err(Error::domain(format!(
            "need finite t_lo < t_hi (got {t_lo}, {t_hi})"
        )));
    }
    let step = (t_hi - t_lo) / (grid - 1) as f64;
    let mut t: Vec<f64> = (0..grid).map(|i| t_lo + i as f64 * step).collect();
    t[grid - 1] = t_hi;
    Ok(t)
}

pub fn integrand_curve(
    x: &Distribution,
    y: &Distribution,
    copula: &CopulaSpec,
    t_grid: &[f64],
) -> Result<IntegrandCurve> {
    copula.eval(0.5, 0.5)?;
    if t_grid.len() < 2
        || t_grid
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
    {
        return Err(Error::domain(
            "t_grid must be strictly increasing with >= 2 points",
        ));
    }
    let values: Vec<f64> = t_grid
        .iter()
        .map(|&t| {
            let (a, b) = (x.cdf_at(t), y.cdf_at(t));
            a + b - 2.0 * copula.eval_at(a, b)
        })
        .collect();
    Ok(IntegrandCurve {
        t_grid: t_grid.to_vec(),
        area: trapezoid(t_grid, &values),
        values,
        copula: *copula,
    })
}

pub fn trapezoid(t: &[f64], v: &[f64]) -> f64 {
    t.windows(2)
        .zip(v.windows(2))
        .map(|(tw, vw)| 0.5 * (tw[1] - tw[0]) * (vw[0] + vw[1]))
        .sum()
}
