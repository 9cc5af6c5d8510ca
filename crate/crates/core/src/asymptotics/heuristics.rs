//! Integrals against the semicircle law behind the heuristic for the
//! growth of `E L_n` and `Var L_n`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use quadrature::double_exponential;
use serde::Serialize;

use crate::error::{Error, Result};

const TOLERANCE: f64 = 1e-13;

/// `64√2 / (9π²)`.
pub fn increment_closed() -> f64 {
    64.0 * SQRT_2 / (9.0 * PI * PI)
}

/// `(54π⁴ + 2835π² − 32768) / (162π⁴)`.
pub fn variance_integral_closed() -> f64 {
    let p2 = PI * PI;
    (54.0 * p2 * p2 + 2835.0 * p2 - 32768.0) / (162.0 * p2 * p2)
}

/// Half of [`variance_integral_closed`], about `0.0149686700757`.
pub const VARIANCE_CONSTANT_CLOSED: f64 = 0.014_968_670_075_7;

#[derive(Clone, Debug, Serialize)]
pub struct HeuristicConstants {
    /// `∫ s(x) dx`, which should be 1.
    pub normalization: f64,
    /// `∫ Ω(x) s(x) dx`.
    pub increment_integral: f64,
    /// `2 ∫ (Ω(x) − 64√2/(9π²))² s(x) dx`.
    pub variance_integral: f64,
    pub variance_constant: f64,
    pub increment_closed: f64,
    pub variance_integral_closed: f64,
    /// Largest gap between a quadrature value and its closed form.
    pub max_deviation: f64,
}

/// `∫_{−√2}^{√2} f(x) s(x) dx` after `x = √2 sin θ`, where
/// `s(x) dx = (2/π) cos²θ dθ` removes the endpoint square roots.
fn semicircle_integral<F: Fn(f64) -> f64>(f: F) -> Result<f64> {
    let out = double_exponential::integrate(
        |t: f64| {
            let c = t.cos();
            f(SQRT_2 * t.sin()) * 2.0 / PI * c * c
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        TOLERANCE,
    );
    if out.error_estimate.is_nan() || out.error_estimate > TOLERANCE || !out.integral.is_finite() {
        return Err(Error::Quadrature(format!(
            "error estimate {:.3e} above {TOLERANCE:.0e} after {} evaluations",
            out.error_estimate, out.num_function_evaluations
        )));
    }
    Ok(out.integral)
}

pub fn heuristic_constants() -> Result<HeuristicConstants> {
    let omega = super::limit_shape;
    let mean = increment_closed();
    let normalization = semicircle_integral(|_| 1.0)?;
    let increment_integral = semicircle_integral(omega)?;
    let variance_integral = 2.0 * semicircle_integral(|x| (omega(x) - mean).powi(2))?;
    let closed = variance_integral_closed();
    let max_deviation = [
        (normalization - 1.0).abs(),
        (increment_integral - mean).abs(),
        (variance_integral - closed).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(HeuristicConstants {
        normalization,
        increment_integral,
        variance_integral,
        variance_constant: variance_integral / 2.0,
        increment_closed: mean,
        variance_integral_closed: closed,
        max_deviation,
    })
}
