use std::path::{Path, PathBuf};
use std::str::FromStr;

use plancherel::exact::{factorial, format_float, rational_to_float};
use plancherel::oracle::{Functional, Oracle, OracleCache, DEFAULT_CAP};
use plancherel::Error;
use rug::{Float, Rational};
use serde::Serialize;

use crate::output::{decimal, sink, write_json, Failure};
use crate::Precision;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long)]
    n: u32,

    /// x_plus_y, x_minus_y, durfee, phi:a, hook_poly:r, content_poly:r,
    /// log_prob, var:<functional>, cov_growth.
    #[arg(long)]
    functional: String,

    /// Largest n the enumeration accepts.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u32,

    /// JSON-lines cache of exact means.
    #[arg(long)]
    cache: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(flatten)]
    precision: Precision,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum Format {
    Text,
    Json,
}

#[derive(Debug)]
enum Target {
    Mean(Functional),
    Variance(Functional),
    /// `E log Pl(λ)`.
    LogProb,
    CovGrowth,
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "log_prob" => Ok(Target::LogProb),
            "cov_growth" => Ok(Target::CovGrowth),
            other => match other.strip_prefix("var:") {
                Some(f) => f.parse().map(Target::Variance),
                None => other.parse().map(Target::Mean),
            },
        }
    }
}

#[derive(Serialize)]
struct Row {
    functional: String,
    n: u32,
    /// Exact value, absent for irrational quantities.
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    decimal: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_bound: Option<String>,
}

pub fn run(args: Args, out: Option<&Path>) -> Result<(), Failure> {
    let target: Target = args.functional.parse()?;
    let oracle = Oracle::with_cap(args.cap);
    let prec = args.precision.bits;
    let exact = |r: Rational| -> Row {
        let x = rational_to_float(&r, prec);
        Row {
            functional: args.functional.clone(),
            n: args.n,
            value: Some(r.to_string()),
            decimal: format_float(&x, 20),
            error_bound: None,
        }
    };
    let row = match target {
        Target::Mean(f) => {
            let value = match &args.cache {
                Some(path) => OracleCache::open(path)?.expect(&oracle, f, args.n)?,
                None => oracle.expect(args.n, f)?,
            };
            exact(value)
        }
        Target::Variance(f) => exact(oracle.variance_exact(args.n, |l| f.evaluate(l))?),
        Target::CovGrowth => exact(oracle.growth_covariance(args.n)?),
        Target::LogProb => {
            let work = prec + 32;
            let log_nf = Float::with_val(work, Float::with_val(work, factorial(args.n)).ln_ref());
            let c = oracle.expect_numeric(
                args.n,
                |l, p| Float::with_val(p, &log_nf) - l.log_hook_sum(p) * 2u32,
                work,
            )?;
            let value = Float::with_val(prec, &c.value);
            Row {
                functional: args.functional.clone(),
                n: args.n,
                value: None,
                decimal: decimal(&value, &c.error_bound),
                error_bound: Some(format!("{:.3e}", c.error_bound.to_f64())),
            }
        }
    };
    let mut w = sink(out)?;
    match args.format {
        Format::Json => write_json(&mut *w, &row)?,
        Format::Text => {
            match (&row.value, &row.error_bound) {
                (Some(v), _) => writeln!(w, "{v} {}", row.decimal)?,
                (None, Some(e)) => writeln!(w, "{} +- {e}", row.decimal)?,
                (None, None) => writeln!(w, "{}", row.decimal)?,
            }
            w.flush()?;
        }
    }
    Ok(())
}
