//! Browser bindings: integrand curves, the three W1 routes side by side,
//! and the Monte Carlo certificate. Every export takes spec strings and
//! returns JSON; `empirical:@a` and `empirical:@b` read the two sample
//! boxes on the page.

use serde::Serialize;
use w1copula::curve::{default_window, uniform_grid};
use w1copula::grammar::{parse_copula_list, parse_distribution_with};
use w1copula::{
    integrand_curve, theorem_certificate, w1_auto, w1_cdf_area, w1_quantile, CopulaSpec,
    Distribution, QuadConfig, W1Result,
};
use wasm_bindgen::prelude::*;

/// Grid points allowed per curve; keeps a slider drag responsive.
pub const MAX_GRID: usize = 4001;
/// Monte Carlo draws allowed per copula in the page.
pub const MAX_DRAWS: usize = 200_000;

fn law(spec: &str, samples_a: &str, samples_b: &str) -> Result<Distribution, String> {
    parse_distribution_with(spec.trim(), |name| match name {
        "a" => Ok(samples_a.to_string()),
        "b" => Ok(samples_b.to_string()),
        other => Err(format!("no sample box named {other:?} (use @a or @b)")),
    })
    .map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report types serialize")
}

#[derive(Serialize)]
struct Curve {
    copula: CopulaSpec,
    values: Vec<f64>,
    area: f64,
}

#[derive(Serialize)]
struct Curves {
    t_grid: Vec<f64>,
    curves: Vec<Curve>,
}

/// Integrand curves over the default window for each listed copula.
pub fn curves_json(
    x: &str,
    y: &str,
    copulas: &str,
    grid: usize,
    samples_a: &str,
    samples_b: &str,
) -> Result<String, String> {
    let (x, y) = (law(x, samples_a, samples_b)?, law(y, samples_a, samples_b)?);
    let copulas = if copulas.trim().is_empty() {
        CopulaSpec::figure_set()
    } else {
        parse_copula_list(copulas).map_err(|e| e.to_string())?
    };
    let (lo, hi) = default_window(&x, &y);
    let t = uniform_grid(lo, hi, grid.min(MAX_GRID)).map_err(|e| e.to_string())?;
    let curves = copulas
        .iter()
        .map(|c| {
            integrand_curve(&x, &y, c, &t).map(|k| Curve {
                copula: k.copula,
                values: k.values,
                area: k.area,
            })
        })
        .collect::<w1copula::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    Ok(to_json(&Curves { t_grid: t, curves }))
}

#[derive(Serialize)]
struct Routes {
    auto: W1Result,
    quantile: W1Result,
    cdf_area: W1Result,
}

/// W1 by the dispatching route, the quantile integral and the CDF area.
pub fn routes_json(x: &str, y: &str, samples_a: &str, samples_b: &str) -> Result<String, String> {
    let (x, y) = (law(x, samples_a, samples_b)?, law(y, samples_a, samples_b)?);
    let cfg = QuadConfig::default();
    let run = |f: fn(&Distribution, &Distribution, &QuadConfig) -> w1copula::Result<W1Result>| {
        f(&x, &y, &cfg).map_err(|e| e.to_string())
    };
    Ok(to_json(&Routes {
        auto: run(w1_auto)?,
        quantile: run(w1_quantile)?,
        cdf_area: run(w1_cdf_area)?,
    }))
}

/// Monte Carlo certificate over `m`, `w`, `pi` and the Gaussian members of
/// `copulas` (the classic ten when empty).
pub fn certify_json(
    x: &str,
    y: &str,
    copulas: &str,
    n: usize,
    seed: u64,
    samples_a: &str,
    samples_b: &str,
) -> Result<String, String> {
    let (x, y) = (law(x, samples_a, samples_b)?, law(y, samples_a, samples_b)?);
    if n > MAX_DRAWS {
        return Err(format!("at most {MAX_DRAWS} draws in the browser"));
    }
    let rhos: Vec<f64> = if copulas.trim().is_empty() {
        w1copula::FIGURE_RHOS.to_vec()
    } else {
        parse_copula_list(copulas)
            .map_err(|e| e.to_string())?
            .into_iter()
            .filter_map(|c| match c {
                CopulaSpec::Gaussian { rho } => Some(rho),
                _ => None,
            })
            .collect()
    };
    theorem_certificate(&x, &y, &rhos, n, seed)
        .map(|c| to_json(&c))
        .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn curves(
    x: &str,
    y: &str,
    copulas: &str,
    grid: usize,
    samples_a: &str,
    samples_b: &str,
) -> Result<String, JsError> {
    curves_json(x, y, copulas, grid, samples_a, samples_b).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn routes(x: &str, y: &str, samples_a: &str, samples_b: &str) -> Result<String, JsError> {
    routes_json(x, y, samples_a, samples_b).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn certify(
    x: &str,
    y: &str,
    copulas: &str,
    n: usize,
    seed: u64,
    samples_a: &str,
    samples_b: &str,
) -> Result<String, JsError> {
    certify_json(x, y, copulas, n, seed, samples_a, samples_b).map_err(|e| JsError::new(&e))
}
