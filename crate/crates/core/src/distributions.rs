//! Univariate laws exposing a CDF, its generalized inverse, support bounds
//! and mean.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::normal;

/// Sorted sample set backing an empirical law.
#[derive(Debug, Clone, PartialEq)]
pub struct Empirical {
    sorted: Vec<f64>,
}

impl Empirical {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("empirical law needs at least one sample"));
        }
        if let Some(bad) = samples.iter().find(|x| !x.is_finite()) {
            return Err(Error::domain(format!(
                "empirical sample {bad} is not finite"
            )));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Empirical { sorted: samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    fn cdf(&self, x: f64) -> f64 {
        let below = self.sorted.partition_point(|&s| s <= x);
        below as f64 / self.sorted.len() as f64
    }

    /// 1-based index of the order statistic returned for level `u` in (0, 1].
    ///
    /// Chosen as the smallest `k` with `k / n >= u` under the same float
    /// arithmetic [`Empirical::cdf`] uses, so the Galois inequalities hold exactly.
    fn quantile_rank(&self, u: f64) -> usize {
        let n = self.sorted.len();
        let nf = n as f64;
        let mut k = ((u * nf).ceil() as usize).clamp(1, n);
        while k > 1 && (k - 1) as f64 / nf >= u {
            k -= 1;
        }
        while k < n && (k as f64) / nf < u {
            k += 1;
        }
        k
    }

    fn quantile(&self, u: f64) -> f64 {
        self.sorted[self.quantile_rank(u) - 1]
    }

    fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.sorted.len() as f64
    }

    fn partial_mean_below(&self, u: f64) -> f64 {
        let n = self.sorted.len();
        let nf = n as f64;
        let whole = ((u * nf).floor() as usize).min(n);
        let mut acc: f64 = self.sorted[..whole].iter().sum::<f64>() / nf;
        if whole < n {
            acc += (u - whole as f64 / nf) * self.sorted[whole];
        }
        acc
    }
}

/// A univariate probability law.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Normal { mu: f64, sigma: f64 },
    Uniform { a: f64, b: f64 },
    Exponential { lambda: f64 },
    Empirical(Empirical),
}

/// Endpoints of the smallest closed interval carrying all the mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportBounds {
    pub lower: f64,
    pub upper: f64,
    pub finite: bool,
}

impl SupportBounds {
    fn new(lower: f64, upper: f64) -> Self {
        SupportBounds {
            lower,
            upper,
            finite: lower.is_finite() && upper.is_finite(),
        }
    }
}

fn require_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {v}")))
    }
}

impl Distribution {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        require_finite("mu", mu)?;
        require_finite("sigma", sigma)?;
        if sigma <= 0.0 {
            return Err(Error::domain(format!("sigma must be > 0, got {sigma}")));
        }
        Ok(Distribution::Normal { mu, sigma })
    }

    /// Rejects `a >= b`; a point mass is `Distribution::empirical(vec![c])`.
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        require_finite("a", a)?;
        require_finite("b", b)?;
        if a >= b {
            return Err(Error::domain(format!("a ≥ b (a = {a}, b = {b})")));
        }
        Ok(Distribution::Uniform { a, b })
    }

    pub fn exponential(lambda: f64) -> Result<Self> {
        require_finite("lambda", lambda)?;
        if lambda <= 0.0 {
            return Err(Error::domain(format!("lambda must be > 0, got {lambda}")));
        }
        Ok(Distribution::Exponential { lambda })
    }

    pub fn empirical(samples: Vec<f64>) -> Result<Self> {
        Empirical::new(samples).map(Distribution::Empirical)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::domain(format!(
                "cdf argument must be finite, got {x}"
            )));
        }
        Ok(self.cdf_at(x))
    }

    /// Unchecked CDF; infinite arguments give 0 or 1.
    pub(crate) fn cdf_at(&self, x: f64) -> f64 {
        match self {
            Distribution::Normal { mu, sigma } => normal::cdf((x - mu) / sigma),
            Distribution::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Distribution::Exponential { lambda } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-lambda * x).exp_m1()
                }
            }
            Distribution::Empirical(e) => e.cdf(x),
        }
    }

    /// Generalized inverse `inf{x : cdf(x) >= u}`.
    ///
    /// Levels 0 and 1 map to the support bounds; an infinite bound is
    /// reported as [`Error::NonFinite`].
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::domain(format!(
                "quantile level must lie in [0, 1], got {u}"
            )));
        }
        if u == 0.0 || u == 1.0 {
            let s = self.support();
            let value = if u == 0.0 { s.lower } else { s.upper };
            if !value.is_finite() {
                return Err(Error::NonFinite { level: u, value });
            }
            return Ok(value);
        }
        Ok(self.quantile_at(u))
    }

    /// Unchecked quantile for `u` in (0, 1).
    pub(crate) fn quantile_at(&self, u: f64) -> f64 {
        match self {
            Distribution::Normal { mu, sigma } => mu + sigma * normal::quantile(u),
            Distribution::Uniform { a, b } => a + (b - a) * u,
            Distribution::Exponential { lambda } => -(-u).ln_1p() / lambda,
            Distribution::Empirical(e) => e.quantile(u),
        }
    }

    pub fn support(&self) -> SupportBounds {
        match self {
            Distribution::Normal { .. } => SupportBounds::new(f64::NEG_INFINITY, f64::INFINITY),
            Distribution::Uniform { a, b } => SupportBounds::new(*a, *b),
            Distribution::Exponential { .. } => SupportBounds::new(0.0, f64::INFINITY),
            Distribution::Empirical(e) => {
                SupportBounds::new(e.sorted[0], e.sorted[e.sorted.len() - 1])
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Distribution::Normal { mu, .. } => *mu,
            Distribution::Uniform { a, b } => 0.5 * (a + b),
            Distribution::Exponential { lambda } => 1.0 / lambda,
            Distribution::Empirical(e) => e.mean(),
        }
    }

    /// `∫_0^u quantile(s) ds`, i.e. `E[X; X <= quantile(u)]` for continuous laws.
    pub fn partial_mean_below(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        if u == 0.0 {
            return 0.0;
        }
        match self {
            Distribution::Normal { mu, sigma } => mu * u - sigma * normal::pdf(normal::quantile(u)),
            Distribution::Uniform { a, b } => a * u + 0.5 * (b - a) * u * u,
            Distribution::Exponential { lambda } => {
                let s = 1.0 - u;
                let log_s = (-u).ln_1p();
                (s * log_s + u) / lambda
            }
            Distribution::Empirical(e) => e.partial_mean_below(u),
        }
    }

    /// `∫_u^1 quantile(s) ds`.
    pub fn partial_mean_above(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        if u == 1.0 {
            return 0.0;
        }
        match self {
            Distribution::Normal { mu, sigma } => {
                mu * (1.0 - u) + sigma * normal::pdf(normal::quantile(u))
            }
            Distribution::Uniform { a, b } => a * (1.0 - u) + 0.5 * (b - a) * (1.0 - u * u),
            Distribution::Exponential { lambda } => {
                let s = 1.0 - u;
                (s - s * s.ln()) / lambda
            }
            Distribution::Empirical(e) => e.mean() - e.partial_mean_below(u),
        }
    }

    /// `∫_{-∞}^t cdf(s) ds = E[(t - X)^+]`.
    pub fn lower_partial_moment(&self, t: f64) -> f64 {
        let p = self.cdf_at(t);
        (t * p - self.partial_mean_below(p)).max(0.0)
    }

    /// `∫_t^∞ (1 - cdf(s)) ds = E[(X - t)^+]`.
    pub fn upper_partial_moment(&self, t: f64) -> f64 {
        let p = self.cdf_at(t);
        (self.partial_mean_above(p) - t * (1.0 - p)).max(0.0)
    }

    /// Points where the CDF is not smooth (kinks and jumps), sorted.
    pub fn cdf_breakpoints(&self) -> Vec<f64> {
        match self {
            Distribution::Normal { .. } => Vec::new(),
            Distribution::Uniform { a, b } => vec![*a, *b],
            Distribution::Exponential { .. } => vec![0.0],
            Distribution::Empirical(e) => {
                let mut v = e.sorted.clone();
                v.dedup();
                v
            }
        }
    }

    /// Levels in (0, 1) where the quantile function jumps, sorted.
    pub fn quantile_breakpoints(&self) -> Vec<f64> {
        match self {
            Distribution::Empirical(e) => {
                let n = e.sorted.len();
                (1..n)
                    .filter(|&i| e.sorted[i] != e.sorted[i - 1])
                    .map(|i| i as f64 / n as f64)
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    /// `Some(c)` when `self` is known in closed form to be `other + c`.
    pub fn location_shift_from(&self, other: &Distribution) -> Option<f64> {
        match (self, other) {
            (
                Distribution::Normal { mu: m1, sigma: s1 },
                Distribution::Normal { mu: m2, sigma: s2 },
            ) if s1 == s2 => Some(m1 - m2),
            (Distribution::Uniform { a: a1, b: b1 }, Distribution::Uniform { a: a2, b: b2 })
                if b1 - a1 == b2 - a2 =>
            {
                Some(a1 - a2)
            }
            (
                Distribution::Exponential { lambda: l1 },
                Distribution::Exponential { lambda: l2 },
            ) if l1 == l2 => Some(0.0),
            (Distribution::Empirical(e1), Distribution::Empirical(e2)) if e1.len() == e2.len() => {
                let c = e1.sorted[0] - e2.sorted[0];
                e1.sorted
                    .iter()
                    .zip(&e2.sorted)
                    .all(|(x, y)| x - y == c)
                    .then_some(c)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::Normal { mu, sigma } => write!(f, "normal:{mu},{sigma}"),
            Distribution::Uniform { a, b } => write!(f, "uniform:{a},{b}"),
            Distribution::Exponential { lambda } => write!(f, "exp:{lambda}"),
            Distribution::Empirical(e) => write!(f, "empirical[n={}]", e.len()),
        }
    }
}
