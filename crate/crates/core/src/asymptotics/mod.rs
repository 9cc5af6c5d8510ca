//! Large-`n` expansions, the limit shape, and residual analysis.

mod heuristics;
mod profile;
mod residual;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::convolution::{constant_h, remark_constant};

pub use heuristics::{
    heuristic_constants, increment_closed, variance_integral_closed, HeuristicConstants,
    VARIANCE_CONSTANT_CLOSED,
};
pub use profile::{
    fluctuation_export, tilde_omega_profile, write_profile_csv, FluctuationRow, ProfilePoint,
    PROFILE_PRESETS,
};
pub use residual::{
    dyadic_grid, fit_power_law, residual_report, FitMethod, PowerFit, ResidualReport,
};

/// Working precision for model coefficients.
pub const MODEL_PRECISION: u32 = 256;

/// `Ω(u)`: `(2/π)(u arcsin(u/√2) + √(2−u²))` on `|u| ≤ √2`, `|u|` outside.
pub fn limit_shape(u: f64) -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    if u.abs() >= s2 {
        return u.abs();
    }
    2.0 / std::f64::consts::PI * (u * (u / s2).asin() + (2.0 - u * u).sqrt())
}

/// Density of the semicircle law on `[−√2, √2]`.
pub fn semicircle(x: f64) -> f64 {
    if x * x >= 2.0 {
        0.0
    } else {
        (2.0 - x * x).sqrt() / std::f64::consts::PI
    }
}

/// `cos` or `sin` of `frequency · √n + phase`.
#[derive(Clone, Debug, Serialize)]
pub struct Oscillator {
    pub function: Trig,
    pub frequency: u32,
    /// Phase as a rational multiple of `π`.
    #[serde(with = "crate::exact::serde_rational")]
    pub phase_over_pi: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trig {
    Cos,
    Sin,
}

/// `coefficient · n^{n_power} · (log n)^{log_factor} · oscillator(√n)`.
#[derive(Clone, Debug, Serialize)]
pub struct Term {
    #[serde(with = "crate::exact::serde_float")]
    pub coefficient: Float,
    #[serde(with = "crate::exact::serde_rational")]
    pub n_power: Rational,
    pub log_factor: u32,
    pub oscillator: Option<Oscillator>,
    /// Terms that belong together (e.g. the two halves of a `δ_n` term) share
    /// a group; ablation removes whole groups.
    pub group: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticModel {
    pub name: String,
    pub terms: Vec<Term>,
    #[serde(with = "crate::exact::serde_rational")]
    pub claimed_error_exponent: Rational,
}

impl AsymptoticModel {
    pub fn groups(&self) -> usize {
        self.terms.iter().map(|t| t.group + 1).max().unwrap_or(0)
    }

    /// The model with its last `k` groups removed.
    pub fn ablate(&self, k: usize) -> AsymptoticModel {
        let keep = self.groups().saturating_sub(k);
        AsymptoticModel {
            name: format!("{}-minus{k}", self.name),
            terms: self
                .terms
                .iter()
                .filter(|t| t.group < keep)
                .cloned()
                .collect(),
            claimed_error_exponent: self.claimed_error_exponent.clone(),
        }
    }

    /// Evaluates at `n > 0` with `prec` bits; `√n` is formed once and
    /// reused by every power and oscillator.
    pub fn eval(&self, n: u64, prec: u32) -> Float {
        let nf = Float::with_val(prec, n);
        let sqrt_n = Float::with_val(prec, nf.sqrt_ref());
        let ln_n = Float::with_val(prec, nf.ln_ref());
        let pi = Float::with_val(prec, Constant::Pi);
        let mut total = Float::new(prec);
        for t in &self.terms {
            let mut v = Float::with_val(prec, &t.coefficient);
            v *= power_of_sqrt(&sqrt_n, &nf, &t.n_power, prec);
            for _ in 0..t.log_factor {
                v *= &ln_n;
            }
            if let Some(osc) = &t.oscillator {
                let mut arg = Float::with_val(prec, &sqrt_n * osc.frequency);
                arg += Float::with_val(prec, &pi * &osc.phase_over_pi);
                v *= match osc.function {
                    Trig::Cos => arg.cos(),
                    Trig::Sin => arg.sin(),
                };
            }
            total += v;
        }
        total
    }
}

/// `n^q` for `q` with denominator 1, 2 or 4 through powers of `√n`;
/// anything else through `exp(q log n)`.
fn power_of_sqrt(sqrt_n: &Float, n: &Float, q: &Rational, prec: u32) -> Float {
    let twice = Rational::from(q * 2u32);
    if *twice.denom() == 1 {
        let k = twice.numer().to_i32().expect("small exponent");
        return Float::with_val(prec, sqrt_n.pow(k));
    }
    let four = Rational::from(q * 4u32);
    if *four.denom() == 1 {
        let k = four.numer().to_i32().expect("small exponent");
        let fourth = Float::with_val(prec, sqrt_n.sqrt_ref());
        return Float::with_val(prec, (&fourth).pow(k));
    }
    (Float::with_val(prec, n.ln_ref()) * Float::with_val(prec, q)).exp()
}

struct Builder {
    prec: u32,
    terms: Vec<Term>,
    group: usize,
}

impl Builder {
    fn new(prec: u32) -> Self {
        Self {
            prec,
            terms: Vec::new(),
            group: 0,
        }
    }

    fn term(&mut self, coefficient: Float, n_power: (i32, i32), log_factor: u32) -> &mut Self {
        self.push(coefficient, n_power, log_factor, None)
    }

    fn push(
        &mut self,
        coefficient: Float,
        n_power: (i32, i32),
        log_factor: u32,
        oscillator: Option<Oscillator>,
    ) -> &mut Self {
        self.terms.push(Term {
            coefficient: Float::with_val(self.prec, coefficient),
            n_power: Rational::from(n_power),
            log_factor,
            oscillator,
            group: self.group,
        });
        self
    }

    fn next_group(&mut self) -> &mut Self {
        self.group += 1;
        self
    }

    fn build(self, name: &str, claimed: (i32, i32)) -> AsymptoticModel {
        AsymptoticModel {
            name: name.to_string(),
            terms: self.terms,
            claimed_error_exponent: Rational::from(claimed),
        }
    }
}

/// `E(X_n + Y_n)` up to `O(n^{−9/4})`, with
/// `δ_n = log n + 2γ + 12 log 2` split into its `log n` and constant parts.
pub fn exy_model(prec: u32) -> AsymptoticModel {
    let mut b = Builder::new(prec);
    let pi = Float::with_val(prec, Constant::Pi);
    let pi2 = Float::with_val(prec, pi.square_ref());
    let delta0 = Float::with_val(prec, Constant::Euler) * 2u32
        + Float::with_val(prec, Constant::Log2) * 12u32;

    b.term(
        Float::with_val(prec, 256u32) / (Float::with_val(prec, &pi2) * 27u32),
        (3, 2),
        0,
    );
    b.next_group().term(Float::with_val(prec, -1), (1, 1), 0);
    // (c δ_n − d) / (e π²) = (c/(e π²)) log n + (c δ0 − d)/(e π²)
    for &(c, d, e, power) in &[
        (9i64, 77i64, 9u32, (1, 2)),
        (3510, 31589, 27648, (-1, 2)),
        (5565, 62224, 786432, (-3, 2)),
    ] {
        let den = Float::with_val(prec, &pi2) * e;
        let log_part = Float::with_val(prec, c) / &den;
        let const_part = (Float::with_val(prec, &delta0 * c) - d) / &den;
        b.next_group()
            .term(log_part, power, 1)
            .term(const_part, power, 0);
    }
    let e8 = Float::with_val(prec, 8).exp();
    let amp = e8 / ((Float::with_val(prec, pi.sqrt_ref()) * &pi) * 4096u32);
    let osc = Oscillator {
        function: Trig::Cos,
        frequency: 8,
        phase_over_pi: Rational::from((1, 4)),
    };
    b.next_group().push(amp, (-7, 4), 0, Some(osc));
    b.build("exy", (-9, 4))
}

/// `ω_{a,n}` for fixed `a`: `(2/π)√n − a/2 + ((4a²+3)/(16π) − (−1)^a (e²/(8π)) sin 4√n) / √n`.
pub fn omega_model(a: u32, prec: u32) -> AsymptoticModel {
    let mut b = Builder::new(prec);
    let pi = Float::with_val(prec, Constant::Pi);
    b.term(Float::with_val(prec, 2u32) / &pi, (1, 2), 0);
    if a > 0 {
        b.next_group()
            .term(Float::with_val(prec, -(a as f64) / 2.0), (0, 1), 0);
    }
    let a2 = u64::from(a) * u64::from(a);
    b.next_group().term(
        Float::with_val(prec, 4 * a2 + 3) / (Float::with_val(prec, &pi) * 16u32),
        (-1, 2),
        0,
    );
    let mut amp = Float::with_val(prec, 2).exp() / (Float::with_val(prec, &pi) * 8u32);
    if a.is_multiple_of(2) {
        amp = -amp;
    }
    let osc = Oscillator {
        function: Trig::Sin,
        frequency: 4,
        phase_over_pi: Rational::new(),
    };
    b.next_group().push(amp, (-1, 2), 0, Some(osc));
    let name = if a == 0 {
        "durfee".to_string()
    } else {
        format!("omega:{a}")
    };
    b.build(&name, (-1, 1))
}

/// `d_n = (2/π)√n + (3/(16π) − (e²/(8π)) sin 4√n)/√n + O(1/n)`.
pub fn durfee_model(prec: u32) -> AsymptoticModel {
    omega_model(0, prec)
}

/// `(2 z_n − log n!)/√n ≈ H − ((13/24) log n + C)/√n` with
/// `C = 13γ/12 + log √(2π) + 1/4 − h'(0)`.
pub fn aep_model(prec: u32) -> AsymptoticModel {
    let h = constant_h(prec);
    let c = remark_constant(prec);
    let mut b = Builder::new(prec);
    b.term(h.value, (0, 1), 0);
    b.next_group()
        .term(Float::with_val(prec, -13) / 24u32, (-1, 2), 1)
        .term(-c.value, (-1, 2), 0);
    b.build("aep", (-1, 2))
}
