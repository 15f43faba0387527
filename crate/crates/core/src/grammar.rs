//! Text forms of distributions and copulas.
//!
//! ```text
//! normal:MU,SIGMA   uniform:A,B   exp:LAMBDA   empirical:@PATH
//! m   w   pi   gaussian:RHO
//! ```
//!
//! Keywords are case-sensitive. Errors carry the offending token and its
//! byte offset in the input.

use crate::copulas::CopulaSpec;
use crate::distributions::Distribution;
use crate::error::{Error, Result};

/// Either kind of parsed object.
#[derive(Debug, Clone, PartialEq)]
pub enum Spec {
    Distribution(Distribution),
    Copula(CopulaSpec),
}

fn parse_error(token: &str, position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        token: token.to_string(),
        position,
        message: message.into(),
    }
}

/// Offset of the parameter list and each parameter token with its offset.
type Params<'a> = Option<(usize, Vec<(usize, &'a str)>)>;

/// Splits `family:params`.
fn split(text: &str) -> (&str, Params<'_>) {
    match text.split_once(':') {
        None => (text, None),
        Some((family, rest)) => {
            let start = family.len() + 1;
            let mut params = Vec::new();
            let mut offset = start;
            for tok in rest.split(',') {
                params.push((offset, tok));
                offset += tok.len() + 1;
            }
            (family, Some((start, params)))
        }
    }
}

fn number(position: usize, tok: &str) -> Result<f64> {
    let trimmed = tok.trim();
    match trimmed.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(parse_error(tok, position, "parameter must be finite")),
        Err(_) => Err(parse_error(tok, position, "parameter is not a number")),
    }
}

fn numbers<const N: usize>(
    text: &str,
    family: &str,
    params: Params<'_>,
) -> Result<([f64; N], usize)> {
    let Some((start, params)) = params else {
        return Err(parse_error(
            family,
            0,
            format!("{family} takes {N} parameter(s) after ':'"),
        ));
    };
    if params.len() != N {
        return Err(parse_error(
            &text[start..],
            start,
            format!("{family} takes {N} parameter(s), got {}", params.len()),
        ));
    }
    let mut out = [0.0; N];
    for (slot, (pos, tok)) in out.iter_mut().zip(params) {
        *slot = number(pos, tok)?;
    }
    Ok((out, start))
}

/// Re-labels a constructor's domain error as a parse error on the parameters.
fn at_params<T>(text: &str, start: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Domain(msg) => parse_error(&text[start..], start, msg),
        other => other,
    })
}

/// Parses a distribution, reading `empirical:@PATH` samples from the file
/// system.
pub fn parse_distribution(text: &str) -> Result<Distribution> {
    parse_distribution_with(text, |path| {
        std::fs::read_to_string(path).map_err(|e| e.to_string())
    })
}

/// Parses a distribution; `load` maps the `PATH` of `empirical:@PATH` to the
/// contents of a sample file.
pub fn parse_distribution_with<L>(text: &str, load: L) -> Result<Distribution>
where
    L: FnOnce(&str) -> std::result::Result<String, String>,
{
    let (family, params) = split(text);
    match family {
        "normal" => {
            let ([mu, sigma], start) = numbers::<2>(text, family, params)?;
            at_params(text, start, Distribution::normal(mu, sigma))
        }
        "uniform" => {
            let ([a, b], start) = numbers::<2>(text, family, params)?;
            at_params(text, start, Distribution::uniform(a, b))
        }
        "exp" => {
            let ([lambda], start) = numbers::<1>(text, family, params)?;
            at_params(text, start, Distribution::exponential(lambda))
        }
        "empirical" => {
            let start = family.len() + 1;
            let arg = text.get(start..).unwrap_or("");
            let Some(path) = arg.strip_prefix('@').filter(|p| !p.is_empty()) else {
                return Err(parse_error(arg, start, "expected empirical:@PATH"));
            };
            let contents = load(path)
                .map_err(|e| parse_error(path, start + 1, format!("cannot read: {e}")))?;
            let samples = parse_samples(&contents).map_err(|(line, tok)| {
                parse_error(
                    &tok,
                    start + 1,
                    format!("{path} line {line}: not a real number"),
                )
            })?;
            at_params(text, start, Distribution::empirical(samples))
        }
        _ => Err(parse_error(family, 0, "unknown distribution family")),
    }
}

/// One real per line; blank lines and `#` comments are skipped. On failure
/// returns the 1-based line number and the offending text.
pub fn parse_samples(contents: &str) -> std::result::Result<Vec<f64>, (usize, String)> {
    let mut out = Vec::new();
    for (i, line) in contents.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        match body.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            _ => return Err((i + 1, body.to_string())),
        }
    }
    Ok(out)
}

pub fn parse_copula(text: &str) -> Result<CopulaSpec> {
    let (family, params) = split(text);
    let bare = |c: CopulaSpec| match &params {
        None => Ok(c),
        Some((start, _)) => Err(parse_error(
            &text[*start..],
            *start,
            format!("{family} takes no parameters"),
        )),
    };
    match family {
        "m" => bare(CopulaSpec::M),
        "w" => bare(CopulaSpec::W),
        "pi" => bare(CopulaSpec::Pi),
        "gaussian" => {
            let ([rho], start) = numbers::<1>(text, family, params)?;
            at_params(text, start, CopulaSpec::gaussian(rho))
        }
        _ => Err(parse_error(family, 0, "unknown copula")),
    }
}

/// Comma-separated copulas, e.g. `m,w,gaussian:0.5`. Offsets in errors are
/// relative to the whole list.
pub fn parse_copula_list(text: &str) -> Result<Vec<CopulaSpec>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for tok in text.split(',') {
        let c = parse_copula(tok.trim()).map_err(|e| match e {
            Error::Parse {
                token,
                position,
                message,
            } => {
                let lead = tok.len() - tok.trim_start().len();
                parse_error(&token, offset + lead + position, message)
            }
            other => other,
        })?;
        out.push(c);
        offset += tok.len() + 1;
    }
    Ok(out)
}

/// Tries the distribution grammar, then the copula grammar.
pub fn parse_spec(text: &str) -> Result<Spec> {
    let (family, _) = split(text);
    match family {
        "m" | "w" | "pi" | "gaussian" => parse_copula(text).map(Spec::Copula),
        _ => parse_distribution(text).map(Spec::Distribution),
    }
}
