//! Residual decay of a sequence against an asymptotic model.

use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use super::AsymptoticModel;
use crate::error::{Error, Result};
use crate::exact::rational_to_f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMethod {
    /// `|residual(n)|` at each grid point.
    Pointwise,
    /// `max |residual|` over `n ≤ m < n + ⌈π√n/2⌉ + 1`, one full period of
    /// the slowest oscillation in the models. Oscillating residuals have
    /// near-zeros that make pointwise slopes meaningless.
    Envelope,
}

impl FitMethod {
    /// Largest index the method reads for grid point `n`.
    pub fn reach(&self, n: u64) -> u64 {
        match self {
            FitMethod::Pointwise => n,
            FitMethod::Envelope => n + window(n) - 1,
        }
    }
}

fn window(n: u64) -> u64 {
    (std::f64::consts::PI * (n as f64).sqrt() / 2.0).ceil() as u64 + 1
}

/// Least-squares line through `(log x, log y)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub log_constant: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
}

pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Option<PowerFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    if ly.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let exponent = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some(PowerFit {
        exponent,
        log_constant: my - exponent * mx,
        r_squared,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub model: String,
    pub method: FitMethod,
    pub grid: Vec<u64>,
    pub residuals: Vec<f64>,
    /// Error estimate of the sequence value behind each residual.
    pub errors: Vec<f64>,
    /// Grid points dropped because the value error reached 10% of the residual.
    pub discarded: Vec<u64>,
    pub fitted_exponent: f64,
    pub fit_quality: f64,
    pub claimed_exponent: f64,
}

impl ResidualReport {
    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n,residual,error")?;
        for ((n, r), e) in self.grid.iter().zip(&self.residuals).zip(&self.errors) {
            writeln!(w, "{n},{r:e},{e:e}")?;
        }
        Ok(())
    }
}

/// Fits `log |sequence(n) − model(n)|` against `log n` on `grid`.
///
/// `sequence(n)` returns the value and an error estimate, or `None` when
/// `n` is out of range. Residuals are formed at `prec` bits.
pub fn residual_report<F>(
    sequence: F,
    model: &AsymptoticModel,
    grid: &[u64],
    method: FitMethod,
    prec: u32,
) -> Result<ResidualReport>
where
    F: Fn(u64) -> Option<(Float, Float)> + Sync,
{
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid.first() == Some(&0) {
        return Err(Error::InvalidArgument(
            "grid must be positive and strictly increasing".into(),
        ));
    }
    let points: Vec<(u64, f64, f64)> = grid
        .par_iter()
        .map(|&n| {
            let span = match method {
                FitMethod::Pointwise => n..n + 1,
                FitMethod::Envelope => n..n + window(n),
            };
            let mut best = (0.0f64, 0.0f64);
            for m in span {
                let (v, e) = sequence(m).ok_or_else(|| {
                    Error::InvalidArgument(format!("sequence value at n={m} is unavailable"))
                })?;
                let r = Float::with_val(prec, &v - model.eval(m, prec)).to_f64();
                if r.abs() >= best.0.abs() {
                    best = (r, e.to_f64());
                }
            }
            Ok((n, best.0, best.1))
        })
        .collect::<Result<_>>()?;

    let mut report = ResidualReport {
        model: model.name.clone(),
        method,
        grid: Vec::new(),
        residuals: Vec::new(),
        errors: Vec::new(),
        discarded: Vec::new(),
        fitted_exponent: f64::NAN,
        fit_quality: f64::NAN,
        claimed_exponent: rational_to_f64(&model.claimed_error_exponent),
    };
    for (n, r, e) in points {
        if e >= 0.1 * r.abs() {
            report.discarded.push(n);
        } else {
            report.grid.push(n);
            report.residuals.push(r);
            report.errors.push(e);
        }
    }
    if report.grid.len() < 3 {
        return Err(Error::PrecisionExhausted(format!(
            "{}: float error reaches 10% of the residual at {:?}; no meaningful fit",
            model.name, report.discarded
        )));
    }
    let xs: Vec<f64> = report.grid.iter().map(|&n| n as f64).collect();
    let fit = fit_power_law(&xs, &report.residuals)
        .ok_or_else(|| Error::InvalidArgument("degenerate residuals".into()))?;
    report.fitted_exponent = fit.exponent;
    report.fit_quality = fit.r_squared;
    Ok(report)
}

/// `2^lo, 2^{lo+1}, …, 2^hi`.
pub fn dyadic_grid(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|k| 1u64 << k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::durfee_model;

    #[test]
    fn exact_power_law_fit() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-1.5)).collect();
        let fit = fit_power_law(&xs, &ys).unwrap();
        assert!((fit.exponent + 1.5).abs() < 1e-12);
        assert!((fit.log_constant - 3f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit_power_law(&[1.0], &[1.0]).is_none());
    }

    #[test]
    fn synthetic_residual_recovers_exponent() {
        let model = durfee_model(128);
        // model + 5/n
        let seq = |n: u64| {
            let v = model.eval(n, 128) + Float::with_val(128, 5) / n;
            Some((v, Float::new(64)))
        };
        for method in [FitMethod::Pointwise, FitMethod::Envelope] {
            let report = residual_report(seq, &model, &dyadic_grid(6, 12), method, 128).unwrap();
            assert!(
                (report.fitted_exponent + 1.0).abs() < 0.02,
                "{method:?} {}",
                report.fitted_exponent
            );
            assert!(report.discarded.is_empty());
        }
    }

    #[test]
    fn noisy_points_are_discarded() {
        let model = durfee_model(128);
        let seq = |n: u64| {
            let v = model.eval(n, 128) + Float::with_val(128, 1) / n;
            let e = if n > 1000 {
                Float::with_val(64, 1)
            } else {
                Float::new(64)
            };
            Some((v, e))
        };
        let r =
            residual_report(seq, &model, &dyadic_grid(4, 12), FitMethod::Pointwise, 128).unwrap();
        assert_eq!(r.discarded, vec![1024, 2048, 4096]);
        assert!(
            residual_report(seq, &model, &dyadic_grid(9, 12), FitMethod::Pointwise, 128).is_err()
        );
    }

    #[test]
    fn grid_must_increase() {
        let model = durfee_model(64);
        let seq = |_: u64| Some((Float::new(64), Float::new(64)));
        assert!(residual_report(seq, &model, &[4, 2], FitMethod::Pointwise, 64).is_err());
    }
}
