use std::path::Path;
use std::str::FromStr;

use plancherel::convolution::{
    aep_term, d_sum, default_z_precision, exy_sum, omega_sum, u_sum, z_sum,
};
use plancherel::exact::factorial;
use plancherel::holonomic::{
    durfee_recurrence, omega_recurrence, u_recurrence, HolonomicRecurrence,
};
use plancherel::oracle::{Functional, Oracle, DEFAULT_CAP};
use plancherel::Error;
use rug::{Float, Rational};

use crate::output::{decimal, sink, Failure};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// u, exy, durfee, omega:a, z or aep.
    #[arg(long)]
    name: String,

    #[arg(long)]
    n_max: u32,

    #[arg(long, value_enum)]
    mode: Option<Mode>,

    /// Recompute with this mode as well and fail on any disagreement.
    #[arg(long, value_enum)]
    verify_with: Option<Mode>,

    /// Run the recurrence in floating point instead of exact arithmetic.
    #[arg(long)]
    float: bool,

    /// Working precision in bits; z and aep default to ⌈4.2n⌉+64 per term,
    /// float recurrences to 256.
    #[arg(long, env = "PLANCHEREL_PRECISION", value_parser = clap::value_parser!(u32).range(64..))]
    precision: Option<u32>,

    /// Enumeration cap for oracle mode.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u32,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sum,
    Recurrence,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Name {
    U,
    Exy,
    Durfee,
    Omega(u32),
    Z,
    Aep,
}

impl FromStr for Name {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "u" => Ok(Name::U),
            "exy" => Ok(Name::Exy),
            "durfee" => Ok(Name::Durfee),
            "z" => Ok(Name::Z),
            "aep" => Ok(Name::Aep),
            other => other
                .strip_prefix("omega:")
                .and_then(|a| a.parse().ok())
                .map(Name::Omega)
                .ok_or_else(|| Error::Parse(format!("unknown sequence {other:?}"))),
        }
    }
}

impl Name {
    fn is_real(&self) -> bool {
        matches!(self, Name::Z | Name::Aep)
    }
}

enum Column {
    Exact(Vec<Rational>),
    /// Values with absolute error bounds.
    Float(Vec<(Float, Float)>),
}

struct Request {
    name: Name,
    n_max: u32,
    float: bool,
    precision: Option<u32>,
    cap: u32,
}

fn recurrence_for(name: Name) -> HolonomicRecurrence {
    match name {
        Name::U | Name::Exy => u_recurrence(),
        Name::Durfee => durfee_recurrence(),
        Name::Omega(a) => omega_recurrence(a),
        Name::Z | Name::Aep => unreachable!("no recurrence for real sequences"),
    }
}

fn compute(req: &Request, mode: Mode) -> Result<Column, Failure> {
    let ns = 1..=req.n_max;
    let shift = |n: u32| {
        if req.name == Name::Exy {
            Rational::from(n)
        } else {
            Rational::new()
        }
    };
    if req.name.is_real() {
        return compute_real(req, mode).map(Column::Float);
    }
    match mode {
        Mode::Sum => Ok(Column::Exact(
            ns.map(|n| match req.name {
                Name::U => u_sum(n),
                Name::Exy => exy_sum(n),
                Name::Durfee => d_sum(n),
                Name::Omega(a) => omega_sum(a, n),
                _ => unreachable!(),
            })
            .collect(),
        )),
        Mode::Recurrence if req.float => {
            let prec = req.precision.unwrap_or(256);
            let seq = recurrence_for(req.name).eval_float(req.n_max as i64, prec)?;
            Ok(Column::Float(
                ns.map(|n| {
                    let v = seq.get(n as i64).expect("in range");
                    let v = Float::with_val(prec, v - Float::with_val(prec, &shift(n)));
                    (v, seq.error(n as i64).expect("in range").clone())
                })
                .collect(),
            ))
        }
        Mode::Recurrence => {
            let seq = recurrence_for(req.name).eval_exact(req.n_max as i64)?;
            Ok(Column::Exact(
                ns.map(|n| seq.get(n as i64).expect("in range") - shift(n))
                    .collect(),
            ))
        }
        Mode::Oracle => {
            let oracle = Oracle::with_cap(req.cap);
            let (f, back) = match req.name {
                Name::U => (Functional::XPlusY, true),
                Name::Exy => (Functional::XPlusY, false),
                Name::Durfee => (Functional::Durfee, false),
                Name::Omega(a) => (Functional::Phi(a as i64), false),
                _ => unreachable!(),
            };
            let mut out = Vec::new();
            for n in ns {
                let v = oracle.expect(n, f)?;
                out.push(if back { v + n } else { v });
            }
            Ok(Column::Exact(out))
        }
    }
}

fn compute_real(req: &Request, mode: Mode) -> Result<Vec<(Float, Float)>, Failure> {
    let prec_for = |n: u32| req.precision.unwrap_or_else(|| default_z_precision(n));
    let mut out = Vec::new();
    match mode {
        Mode::Recurrence => {
            return Err(Failure::Usage(format!(
                "no recurrence mode for {}; use sum or oracle",
                sequence_id(req.name)
            )))
        }
        Mode::Sum => {
            for n in 1..=req.n_max {
                let c = if req.name == Name::Z {
                    z_sum(n, prec_for(n))?
                } else {
                    aep_term(n, prec_for(n))?
                };
                out.push((c.value, c.error_bound));
            }
        }
        Mode::Oracle => {
            let oracle = Oracle::with_cap(req.cap);
            for n in 1..=req.n_max {
                let prec = req.precision.unwrap_or(128);
                let z = oracle.expect_numeric(n, |l, p| l.log_hook_sum(p), prec)?;
                if req.name == Name::Z {
                    out.push((z.value, z.error_bound));
                } else {
                    let log_nf =
                        Float::with_val(prec, Float::with_val(prec, factorial(n)).ln_ref());
                    let root = Float::with_val(prec, n).sqrt();
                    let v = (Float::with_val(prec, &z.value * 2u32) - &log_nf) / &root;
                    let mut err =
                        Float::with_val(64, &z.error_bound * 2u32) / Float::with_val(64, &root);
                    err += Float::with_val(64, log_nf.abs_ref()) >> (prec as i32 - 3);
                    out.push((v, err));
                }
            }
        }
    }
    Ok(out)
}

fn sequence_id(name: Name) -> String {
    match name {
        Name::U => "u".into(),
        Name::Exy => "exy".into(),
        Name::Durfee => "durfee".into(),
        Name::Omega(a) => format!("omega:{a}"),
        Name::Z => "z".into(),
        Name::Aep => "aep".into(),
    }
}

/// Index (from 1) of the first disagreement.
fn first_mismatch(a: &Column, b: &Column) -> Option<usize> {
    let fits = |x: &Float, e: &Float, y: &Float, f: &Float| {
        let gap = Float::with_val(x.prec().max(y.prec()), x - y).abs();
        gap <= Float::with_val(64, e + f)
    };
    let hit = match (a, b) {
        (Column::Exact(x), Column::Exact(y)) => x.iter().zip(y).position(|(p, q)| p != q),
        (Column::Float(x), Column::Float(y)) => x
            .iter()
            .zip(y)
            .position(|((p, e), (q, f))| !fits(p, e, q, f)),
        (Column::Exact(x), Column::Float(y)) | (Column::Float(y), Column::Exact(x)) => {
            x.iter().zip(y).position(|(p, (q, f))| {
                !fits(&Float::with_val(q.prec() + 64, p), &Float::new(64), q, f)
            })
        }
    };
    hit.map(|i| i + 1)
}

pub fn run(args: Args, out: Option<&Path>) -> Result<(), Failure> {
    let name: Name = args.name.parse()?;
    let req = Request {
        name,
        n_max: args.n_max,
        float: args.float,
        precision: args.precision,
        cap: args.cap,
    };
    let mode = args.mode.unwrap_or(if name.is_real() {
        Mode::Sum
    } else {
        Mode::Recurrence
    });
    let column = compute(&req, mode)?;
    if let Some(other) = args.verify_with {
        let check = compute(&req, other)?;
        if let Some(n) = first_mismatch(&column, &check) {
            return Err(Failure::Validation(Some(format!(
                "{} disagrees between {mode:?} and {other:?} modes at n={n}",
                sequence_id(name)
            ))));
        }
    }
    let mut w = sink(out)?;
    writeln!(w, "n,value")?;
    match &column {
        Column::Exact(vals) => {
            for (i, v) in vals.iter().enumerate() {
                writeln!(w, "{},{v}", i + 1)?;
            }
        }
        Column::Float(vals) => {
            for (i, (v, e)) in vals.iter().enumerate() {
                writeln!(w, "{},{}", i + 1, decimal(v, e))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
