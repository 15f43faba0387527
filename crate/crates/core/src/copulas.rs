//! Bivariate copulas: the Fréchet–Hoeffding bounds `M` and `W`, the
//! independence copula `Π`, and the Gaussian family.

use std::fmt;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Serialize, Serializer};

use crate::bvn::bivariate_normal_cdf;
use crate::error::{Error, Result};
use crate::normal;

/// A 2-copula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CopulaSpec {
    /// Comonotone upper bound `min(u, v)`.
    M,
    /// Countermonotone lower bound `max(u + v - 1, 0)`.
    W,
    /// Independence `u v`.
    Pi,
    Gaussian {
        rho: f64,
    },
}

/// Gaussian correlations plotted in the classic integrand figure, in that order.
pub const FIGURE_RHOS: [f64; 10] = [-1.0, -0.8, -0.64, -0.4, -0.12, 0.64, 0.4, 0.12, 0.8, 1.0];

impl CopulaSpec {
    pub fn gaussian(rho: f64) -> Result<Self> {
        check_rho(rho)?;
        Ok(CopulaSpec::Gaussian { rho })
    }

    /// `M`, `W`, then the Gaussian family for [`FIGURE_RHOS`].
    pub fn figure_set() -> Vec<CopulaSpec> {
        let mut v = vec![CopulaSpec::M, CopulaSpec::W];
        v.extend(FIGURE_RHOS.iter().map(|&rho| CopulaSpec::Gaussian { rho }));
        v
    }

    /// Closed-form equivalent for the degenerate Gaussian members.
    fn canonical(self) -> Self {
        match self {
            CopulaSpec::Gaussian { rho: 1.0 } => CopulaSpec::M,
            CopulaSpec::Gaussian { rho: -1.0 } => CopulaSpec::W,
            CopulaSpec::Gaussian { rho: 0.0 } => CopulaSpec::Pi,
            other => other,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            CopulaSpec::Gaussian { rho } => check_rho(*rho),
            _ => Ok(()),
        }
    }

    /// `C(u, v)` for `u, v` in [0, 1].
    pub fn eval(&self, u: f64, v: f64) -> Result<f64> {
        self.validate()?;
        if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v) {
            return Err(Error::domain(format!(
                "copula arguments must lie in [0, 1], got ({u}, {v})"
            )));
        }
        Ok(self.eval_at(u, v))
    }

    /// Unchecked evaluation; `u`, `v` in [0, 1] and a valid `rho` assumed.
    pub(crate) fn eval_at(&self, u: f64, v: f64) -> f64 {
        match self.canonical() {
            CopulaSpec::M => u.min(v),
            CopulaSpec::W => frechet_lower(u, v),
            CopulaSpec::Pi => u * v,
            CopulaSpec::Gaussian { rho } => {
                if u == 0.0 || v == 0.0 {
                    0.0
                } else if u == 1.0 {
                    v
                } else if v == 1.0 {
                    u
                } else {
                    bivariate_normal_cdf(normal::quantile(u), normal::quantile(v), rho)
                        .unwrap_or(f64::NAN)
                        // guard the Fréchet bounds against last-ulp drift
                        .clamp(frechet_lower(u, v), u.min(v))
                }
            }
        }
    }

    /// Seeded stream of `(u, v)` draws from this copula.
    pub fn sampler(&self, seed: u64) -> Result<CopulaSampler> {
        self.validate()?;
        Ok(CopulaSampler {
            copula: self.canonical(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    /// `n` draws; deterministic in `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
        if n == 0 {
            return Err(Error::domain("sample size must be at least 1"));
        }
        Ok(self.sampler(seed)?.take(n).collect())
    }

    /// Checks groundedness, uniform margins, 2-increasingness and the
    /// Fréchet–Hoeffding bounds on a `grid_n x grid_n` lattice over [0, 1]².
    pub fn verify_axioms(&self, grid_n: usize) -> Result<AxiomReport> {
        self.validate()?;
        if grid_n < 2 {
            return Err(Error::domain("axiom grid needs at least 2 points per side"));
        }
        let step = 1.0 / (grid_n - 1) as f64;
        let pts: Vec<f64> = (0..grid_n).map(|i| (i as f64 * step).min(1.0)).collect();
        let table: Vec<Vec<f64>> = pts
            .iter()
            .map(|&u| pts.iter().map(|&v| self.eval_at(u, v)).collect())
            .collect();

        let mut grounded = 0.0_f64;
        let mut margins = 0.0_f64;
        for (i, &p) in pts.iter().enumerate() {
            grounded = grounded.max(table[i][0].abs()).max(table[0][i].abs());
            margins = margins
                .max((table[i][grid_n - 1] - p).abs())
                .max((table[grid_n - 1][i] - p).abs());
        }

        let mut two_increasing = 0.0_f64;
        for i in 0..grid_n - 1 {
            for j in 0..grid_n - 1 {
                let volume =
                    (table[i + 1][j + 1] - table[i + 1][j]) - (table[i][j + 1] - table[i][j]);
                two_increasing = two_increasing.max(-volume);
            }
        }

        let mut frechet = 0.0_f64;
        for (i, &u) in pts.iter().enumerate() {
            for (j, &v) in pts.iter().enumerate() {
                let c = table[i][j];
                let lower = frechet_lower(u, v);
                let upper = u.min(v);
                frechet = frechet.max(lower - c).max(c - upper);
            }
        }

        let tol = AxiomReport::TOLERANCE;
        Ok(AxiomReport {
            copula: *self,
            grid_n,
            grounded: grounded <= tol,
            grounded_violation: grounded,
            margins: margins <= tol,
            margins_violation: margins,
            two_increasing: two_increasing <= tol,
            two_increasing_violation: two_increasing.max(0.0),
            frechet: frechet <= tol,
            frechet_violation: frechet.max(0.0),
        })
    }
}

/// `max(u + v - 1, 0)`, ordered so that `W(1, v) == v` exactly.
pub(crate) fn frechet_lower(u: f64, v: f64) -> f64 {
    let (hi, lo) = if u >= v { (u, v) } else { (v, u) };
    ((hi - 1.0) + lo).max(0.0)
}

fn check_rho(rho: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::domain(format!("|rho| > 1 (rho = {rho})")))
    }
}

impl fmt::Display for CopulaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopulaSpec::M => f.write_str("m"),
            CopulaSpec::W => f.write_str("w"),
            CopulaSpec::Pi => f.write_str("pi"),
            CopulaSpec::Gaussian { rho } => write!(f, "gaussian:{rho}"),
        }
    }
}

impl Serialize for CopulaSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Infinite iterator of copula draws backed by ChaCha8 seeded from a `u64`.
#[derive(Debug, Clone)]
pub struct CopulaSampler {
    copula: CopulaSpec,
    rng: ChaCha8Rng,
}

impl Iterator for CopulaSampler {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        let pair = match self.copula {
            CopulaSpec::M => {
                let u: f64 = self.rng.sample(Open01);
                (u, u)
            }
            CopulaSpec::W => {
                let u: f64 = self.rng.sample(Open01);
                (u, 1.0 - u)
            }
            CopulaSpec::Pi => (self.rng.sample(Open01), self.rng.sample(Open01)),
            CopulaSpec::Gaussian { rho } => {
                let z1: f64 = self.rng.sample(StandardNormal);
                let z2: f64 = self.rng.sample(StandardNormal);
                let z2 = rho * z1 + (1.0 - rho * rho).sqrt() * z2;
                (normal::cdf(z1), normal::cdf(z2))
            }
        };
        Some(pair)
    }
}

/// Result of [`CopulaSpec::verify_axioms`]; violations are worst-case magnitudes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub copula: CopulaSpec,
    pub grid_n: usize,
    pub grounded: bool,
    pub grounded_violation: f64,
    pub margins: bool,
    pub margins_violation: f64,
    pub two_increasing: bool,
    pub two_increasing_violation: f64,
    pub frechet: bool,
    pub frechet_violation: f64,
}

impl AxiomReport {
    pub const TOLERANCE: f64 = 1e-9;

    pub fn passed(&self) -> bool {
        self.grounded && self.margins && self.two_increasing && self.frechet
    }

    pub fn max_violation(&self) -> f64 {
        self.grounded_violation
            .max(self.margins_violation)
            .max(self.two_increasing_violation)
            .max(self.frechet_violation)
    }
}
