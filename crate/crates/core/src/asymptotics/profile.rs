//! Rescaled profiles `Ω̃_n(u) = √(2/n) (ω_{a,n} + a/2)` at `u = a/√(2n)`.

use std::io::Write;

use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use super::limit_shape;
use crate::convolution::omega_sum;
use crate::error::{Error, Result};
use crate::exact::{decimal_digits, format_float};
use crate::holonomic::omega_recurrence;

/// Reference values of `n` for fluctuation profiles.
pub const PROFILE_PRESETS: [u32; 6] = [1573, 6230, 24798, 98943, 200415, 200767];

/// Up to this `n` the profile uses the exact binomial sum.
const EXACT_LIMIT: u32 = 150;

#[derive(Clone, Debug, Serialize)]
pub struct ProfilePoint {
    pub a: u32,
    pub u: f64,
    #[serde(with = "crate::exact::serde_float")]
    pub value: Float,
    /// Error estimate of `value` (zero in exact mode).
    pub error: f64,
    pub omega: f64,
    pub difference: f64,
}

/// `a = 0..=a_max` with `a_max ≤ ⌈1.3 √(2n)⌉`.
pub fn tilde_omega_profile(n: u32, a_max: u32, prec: u32) -> Result<Vec<ProfilePoint>> {
    if n == 0 {
        return Err(Error::InvalidArgument("profile needs n >= 1".into()));
    }
    let limit = (1.3 * (2.0 * n as f64).sqrt()).ceil() as u32;
    if a_max > limit {
        return Err(Error::InvalidArgument(format!(
            "a_max = {a_max} exceeds ceil(1.3 sqrt(2n)) = {limit}"
        )));
    }
    let scale = Float::with_val(prec, Float::with_val(prec, 2) / n).sqrt();
    let root = (2.0 * n as f64).sqrt();
    (0..=a_max)
        .into_par_iter()
        .map(|a| {
            let (omega, err) = if n <= EXACT_LIMIT {
                (Float::with_val(prec, omega_sum(a, n)), Float::new(64))
            } else {
                omega_recurrence(a).value_at(n as i64, prec)?
            };
            let shifted = omega + Float::with_val(prec, a) / 2u32;
            let value = Float::with_val(prec, &shifted * &scale);
            let error = (err * Float::with_val(64, &scale)).to_f64();
            let u = a as f64 / root;
            let shape = limit_shape(u);
            Ok(ProfilePoint {
                a,
                u,
                difference: value.to_f64() - shape,
                value,
                error,
                omega: shape,
            })
        })
        .collect()
}

/// CSV `u,a,tilde_omega,omega,difference,error`.
pub fn write_profile_csv<W: Write>(mut w: W, points: &[ProfilePoint]) -> Result<()> {
    writeln!(w, "u,a,tilde_omega,omega,difference,error")?;
    for p in points {
        let digits = decimal_digits(p.value.prec()).min(30);
        writeln!(
            w,
            "{:.15},{},{},{:.15},{:.6e},{:.3e}",
            p.u,
            p.a,
            format_float(&p.value, digits),
            p.omega,
            p.difference,
            p.error
        )?;
    }
    Ok(())
}

/// One point of a progression `a ≡ residue (mod m)`.
#[derive(Clone, Debug, Serialize)]
pub struct FluctuationRow {
    pub residue: u32,
    pub a: u32,
    pub u: f64,
    pub difference: f64,
    /// Change from the previous point of the same progression.
    pub step: f64,
}

/// Differences `Ω̃_n − Ω` along the progressions `a ≡ r (mod m)`.
pub fn fluctuation_export(points: &[ProfilePoint], m: u32) -> Result<Vec<FluctuationRow>> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "progression step must be positive".into(),
        ));
    }
    let mut rows = Vec::new();
    for r in 0..m {
        let mut prev: Option<f64> = None;
        for p in points.iter().filter(|p| p.a % m == r) {
            let step = prev.map_or(0.0, |q| p.difference - q);
            rows.push(FluctuationRow {
                residue: r,
                a: p.a,
                u: p.u,
                difference: p.difference,
                step,
            });
            prev = Some(p.difference);
        }
    }
    Ok(rows)
}
