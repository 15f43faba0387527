//! Monte Carlo estimates of `E_C|X - Y|` drawn on the unit square, and a
//! seeded certificate that `M` minimises (and `W` maximises) the expected
//! distance over a set of copulas.

use serde::Serialize;

use crate::copulas::CopulaSpec;
use crate::distributions::Distribution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n)`.
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
}

/// Rejected draws tolerated per accepted draw before giving up.
const MAX_REJECTIONS: usize = 64;

/// Averages `|F_X^{-1}(u) - F_Y^{-1}(v)|` over `n` draws `(u, v) ~ c`.
///
/// A draw that lands on a level with an infinite quantile is discarded and
/// replaced by the next one in the stream.
pub fn mc_expected_distance(
    x: &Distribution,
    y: &Distribution,
    c: &CopulaSpec,
    n: usize,
    seed: u64,
) -> Result<MCEstimate> {
    if n < 2 {
        return Err(Error::domain("Monte Carlo needs n >= 2"));
    }
    let mut draws = c.sampler(seed)?;
    let mut values = Vec::with_capacity(n);
    let mut rejected = 0usize;
    while values.len() < n {
        let (u, v) = draws.next().expect("sampler is infinite");
        let d = (x.quantile_at(u) - y.quantile_at(v)).abs();
        if d.is_finite() {
            values.push(d);
        } else {
            rejected += 1;
            if rejected > MAX_REJECTIONS * n {
                return Err(Error::Evaluation { at: u });
            }
        }
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let ss: f64 = values.iter().map(|d| (d - mean) * (d - mean)).sum();
    let std_error = (ss / (nf - 1.0)).sqrt() / nf.sqrt();
    Ok(MCEstimate {
        mean,
        std_error,
        n,
        seed,
    })
}

/// Least `n` accepted by [`theorem_certificate`].
pub const CERTIFICATE_MIN_N: usize = 1000;

/// Standard errors of slack allowed in each pairwise comparison.
pub const CERTIFICATE_SIGMAS: f64 = 3.0;

/// Absolute slack added to every comparison; covers the case where both
/// estimates are exact up to rounding and the standard errors vanish.
pub const CERTIFICATE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// `E_M <= E_C`.
    MMinimal,
    /// `E_W >= E_C`.
    WMaximal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CopulaEstimate {
    pub copula: CopulaSpec,
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub copula: CopulaSpec,
    pub claim: Claim,
    /// How far the ordering fails beyond the allowed slack.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub x: String,
    pub y: String,
    pub n: usize,
    pub seed: u64,
    pub passed: bool,
    pub estimates: Vec<CopulaEstimate>,
    pub violations: Vec<Violation>,
}

/// Estimates `E_C|X - Y|` for `M`, `W`, `Π` and `Gaussian(ρ)` for each `ρ`,
/// all with the same `seed`, and checks that `M` is smallest and `W` largest
/// up to [`CERTIFICATE_SIGMAS`] combined standard errors.
pub fn theorem_certificate(
    x: &Distribution,
    y: &Distribution,
    rhos: &[f64],
    n: usize,
    seed: u64,
) -> Result<Certificate> {
    if n < CERTIFICATE_MIN_N {
        return Err(Error::domain(format!(
            "certificate needs n >= {CERTIFICATE_MIN_N} (got {n})"
        )));
    }
    let mut copulas = vec![CopulaSpec::M, CopulaSpec::W, CopulaSpec::Pi];
    for &rho in rhos {
        copulas.push(CopulaSpec::gaussian(rho)?);
    }
    let estimates = copulas
        .iter()
        .map(|c| {
            mc_expected_distance(x, y, c, n, seed).map(|e| CopulaEstimate {
                copula: *c,
                mean: e.mean,
                std_error: e.std_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let violations = ordering_violations(&estimates);
    Ok(Certificate {
        x: x.to_string(),
        y: y.to_string(),
        n,
        seed,
        passed: violations.is_empty(),
        estimates,
        violations,
    })
}

/// Orderings broken by `estimates`, whose first two entries are `M` and `W`.
fn ordering_violations(estimates: &[CopulaEstimate]) -> Vec<Violation> {
    let (m, w) = (estimates[0], estimates[1]);
    let slack = |a: &CopulaEstimate, b: &CopulaEstimate| {
        CERTIFICATE_SIGMAS * a.std_error.hypot(b.std_error) + CERTIFICATE_FLOOR
    };
    let mut violations = Vec::new();
    for e in &estimates[1..] {
        let over = m.mean - e.mean - slack(&m, e);
        if over > 0.0 {
            violations.push(Violation {
                copula: e.copula,
                claim: Claim::MMinimal,
                excess: over,
            });
        }
    }
    for e in estimates.iter().filter(|e| e.copula != CopulaSpec::W) {
        let under = e.mean - w.mean - slack(&w, e);
        if under > 0.0 {
            violations.push(Violation {
                copula: e.copula,
                claim: Claim::WMaximal,
                excess: under,
            });
        }
    }
    violations
}
