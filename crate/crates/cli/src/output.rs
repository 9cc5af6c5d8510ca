use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use plancherel::exact::{decimal_digits, format_float};
use plancherel::Error;
use rug::Float;

/// Exit status classes.
#[derive(Debug)]
pub enum Failure {
    /// A check ran and failed (exit 1). The report has already been printed.
    Validation(Option<String>),
    /// Bad flags or arguments (exit 2).
    Usage(String),
    /// Enumeration cap, precision or I/O exhaustion (exit 3).
    Resource(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    pub fn message(&self) -> Option<&str> {
        match self {
            Failure::Validation(m) => m.as_deref(),
            Failure::Usage(m) | Failure::Resource(m) => Some(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. }
            | Error::PrecisionExhausted(_)
            | Error::Io(_)
            | Error::Quadrature(_) => Failure::Resource(e.to_string()),
            Error::InvalidArgument(_)
            | Error::Parse(_)
            | Error::InvalidPartition(_)
            | Error::InvalidPermutation(_)
            | Error::InvalidTableau(_)
            | Error::DuplicateEntry(_) => Failure::Usage(e.to_string()),
            Error::SingularRecurrence(_) | Error::Json(_) => {
                Failure::Validation(Some(e.to_string()))
            }
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Resource(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Resource(e.to_string())
    }
}

pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Significant digits the error bound certifies, capped by the precision.
pub fn certified_digits(value: &Float, error: &Float) -> usize {
    let cap = decimal_digits(value.prec());
    if value.is_zero() || error.is_zero() {
        return cap;
    }
    let rel = Float::with_val(64, error / Float::with_val(64, value.abs_ref()));
    let digits = -rel.to_f64().log10();
    if digits.is_finite() {
        (digits.floor().max(1.0) as usize).min(cap)
    } else {
        cap
    }
}

pub fn decimal(value: &Float, error: &Float) -> String {
    format_float(value, certified_digits(value, error))
}

pub fn write_json<T: serde::Serialize>(w: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
