//! `w1copula`: W1 distances, copula integrand curves and M-copula
//! certificates from the command line.
//!
//! Exit codes: 0 success, 2 bad input, 3 numerical failure, 4 a certificate
//! or axiom check failed.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use w1copula::curve::{default_window, uniform_grid};
use w1copula::grammar::parse_copula_list;
use w1copula::{
    integrand_curve, parse_copula, parse_distribution, theorem_certificate, w1_auto, w1_cdf_area,
    w1_empirical_sorted, w1_quantile, CopulaSpec, Distribution, Error, QuadConfig, W1Result,
    FIGURE_RHOS,
};

#[derive(Debug, Parser)]
#[command(
    name = "w1copula",
    version,
    about = "1-Wasserstein distance through copulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// W1 distance between two laws.
    W1 {
        /// First law, e.g. normal:15,1
        x: String,
        /// Second law, e.g. uniform:12,16
        y: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Integrand F_X + F_Y - 2 C(F_X, F_Y) on a grid, one block per copula.
    Integrand {
        /// First law
        x: String,
        /// Second law
        y: String,
        /// Comma-separated copulas [default: m,w and the ten classic Gaussian rhos]
        #[arg(long)]
        copulas: Option<String>,
        /// Points per curve, endpoints included
        #[arg(long, default_value_t = 401)]
        grid: usize,
        /// Left end [default: smaller 1e-6 quantile of the two laws]
        #[arg(long, allow_hyphen_values = true)]
        t_lo: Option<f64>,
        /// Right end [default: larger 1 - 1e-6 quantile of the two laws]
        #[arg(long, allow_hyphen_values = true)]
        t_hi: Option<f64>,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Monte Carlo check that M gives the smallest and W the largest E|X - Y|.
    Certify {
        /// First law
        x: String,
        /// Second law
        y: String,
        /// Gaussian members to include besides m, w and pi [default: the ten classic rhos]
        #[arg(long)]
        copulas: Option<String>,
        /// Draws per copula
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        /// Shared by every copula, so all estimates use common random numbers
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Copula axioms on a grid x grid lattice.
    CheckCopula {
        /// m, w, pi or gaussian:RHO
        copula: String,
        #[arg(long, default_value_t = 41)]
        grid: usize,
        #[command(flatten)]
        format: FormatArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Quantile,
    Cdf,
    Sorted,
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Absolute quadrature tolerance [default: 1e-9]
    #[arg(long, allow_hyphen_values = true)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance [default: 1e-8]
    #[arg(long, allow_hyphen_values = true)]
    rel_tol: Option<f64>,
    /// Quantile level cut from each tail [default: 1e-7]
    #[arg(long, allow_hyphen_values = true)]
    tail_eps: Option<f64>,
}

impl TolArgs {
    fn config(&self) -> QuadConfig {
        let d = QuadConfig::default();
        QuadConfig {
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            tail_eps: self.tail_eps.unwrap_or(d.tail_eps),
            ..d
        }
    }
}

#[derive(Debug, Args)]
struct FormatArgs {
    /// Emit JSON
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

impl FormatArgs {
    fn resolve(&self, default: Format) -> Format {
        match (self.json, self.csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => default,
        }
    }
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical() { 3 } else { 2 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn cmd_w1(
    x: &str,
    y: &str,
    method: MethodArg,
    cfg: &QuadConfig,
    fmt: Format,
) -> Result<String, Failure> {
    let (x, y) = (parse_distribution(x)?, parse_distribution(y)?);
    cfg.validate()?;
    let r: W1Result = match method {
        MethodArg::Auto => w1_auto(&x, &y, cfg)?,
        MethodArg::Quantile => w1_quantile(&x, &y, cfg)?,
        MethodArg::Cdf => w1_cdf_area(&x, &y, cfg)?,
        MethodArg::Sorted => match (&x, &y) {
            (Distribution::Empirical(a), Distribution::Empirical(b)) => {
                w1_empirical_sorted(a.samples(), b.samples())?
            }
            _ => {
                return Err(Failure {
                    code: 2,
                    message: "--method sorted needs two empirical laws".into(),
                })
            }
        },
    };
    Ok(match fmt {
        Format::Json => json(&r),
        Format::Csv => format!(
            "value,method,error_estimate,fast_path\n{},{},{},{}\n",
            r.value,
            r.method.as_str(),
            r.error_estimate,
            r.fast_path
        ),
    })
}

fn cmd_integrand(
    x: &str,
    y: &str,
    copulas: Option<&str>,
    grid: usize,
    t_lo: Option<f64>,
    t_hi: Option<f64>,
    fmt: Format,
) -> Result<String, Failure> {
    let (x, y) = (parse_distribution(x)?, parse_distribution(y)?);
    let copulas = match copulas {
        Some(list) => parse_copula_list(list)?,
        None => CopulaSpec::figure_set(),
    };
    let (lo, hi) = default_window(&x, &y);
    let t = uniform_grid(t_lo.unwrap_or(lo), t_hi.unwrap_or(hi), grid)?;
    let curves = copulas
        .iter()
        .map(|c| integrand_curve(&x, &y, c, &t))
        .collect::<w1copula::Result<Vec<_>>>()?;
    Ok(match fmt {
        Format::Json => json(&curves),
        Format::Csv => {
            let mut out = String::from("t,copula,value\n");
            for c in &curves {
                for (t, v) in c.t_grid.iter().zip(&c.values) {
                    writeln!(out, "{t},{},{v}", c.copula).unwrap();
                }
            }
            for c in &curves {
                writeln!(out, "#area,{},{}", c.copula, c.area).unwrap();
            }
            out
        }
    })
}

fn cmd_certify(
    x: &str,
    y: &str,
    copulas: Option<&str>,
    n: usize,
    seed: u64,
    fmt: Format,
) -> Result<String, Failure> {
    let (x, y) = (parse_distribution(x)?, parse_distribution(y)?);
    let rhos: Vec<f64> = match copulas {
        None => FIGURE_RHOS.to_vec(),
        Some(list) => parse_copula_list(list)?
            .into_iter()
            .filter_map(|c| match c {
                CopulaSpec::Gaussian { rho } => Some(rho),
                _ => None,
            })
            .collect(),
    };
    let cert = theorem_certificate(&x, &y, &rhos, n, seed)?;
    let body = match fmt {
        Format::Json => json(&cert),
        Format::Csv => {
            let mut out = String::from("copula,mean,std_error\n");
            for e in &cert.estimates {
                writeln!(out, "{},{},{}", e.copula, e.mean, e.std_error).unwrap();
            }
            for v in &cert.violations {
                writeln!(out, "#violation,{},{:?},{}", v.copula, v.claim, v.excess).unwrap();
            }
            writeln!(out, "#passed,{}", cert.passed).unwrap();
            out
        }
    };
    if cert.passed {
        Ok(body)
    } else {
        print!("{body}");
        Err(Failure {
            code: 4,
            message: format!("certificate failed for {} copula(s)", cert.violations.len()),
        })
    }
}

fn cmd_check_copula(copula: &str, grid: usize, fmt: Format) -> Result<String, Failure> {
    let c = parse_copula(copula)?;
    let report = c.verify_axioms(grid)?;
    let body = match fmt {
        Format::Json => json(&report),
        Format::Csv => format!(
            "copula,grid_n,grounded,margins,two_increasing,frechet,max_violation\n{},{},{},{},{},{},{}\n",
            report.copula,
            report.grid_n,
            report.grounded,
            report.margins,
            report.two_increasing,
            report.frechet,
            report.max_violation()
        ),
    };
    if report.passed() {
        Ok(body)
    } else {
        print!("{body}");
        Err(Failure {
            code: 4,
            message: format!("{c} violates the copula axioms"),
        })
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::W1 {
            x,
            y,
            method,
            tol,
            format,
        } => cmd_w1(&x, &y, method, &tol.config(), format.resolve(Format::Json)),
        Command::Integrand {
            x,
            y,
            copulas,
            grid,
            t_lo,
            t_hi,
            format,
        } => cmd_integrand(
            &x,
            &y,
            copulas.as_deref(),
            grid,
            t_lo,
            t_hi,
            format.resolve(Format::Csv),
        ),
        Command::Certify {
            x,
            y,
            copulas,
            n,
            seed,
            format,
        } => cmd_certify(
            &x,
            &y,
            copulas.as_deref(),
            n,
            seed,
            format.resolve(Format::Json),
        ),
        Command::CheckCopula {
            copula,
            grid,
            format,
        } => cmd_check_copula(&copula, grid, format.resolve(Format::Json)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
