//! Linear recurrences with polynomial coefficients, evaluated forward in
//! exact rational or high-precision float arithmetic.
//!
//! A recurrence of order `k` is stored as
//! `lead(n) s(n+k) = Σ_{i<k} c_i(n) s(n+i)`, valid for `n ≥ valid_from`,
//! together with seed values starting at index `offset` (which may be
//! negative when a relation is anchored below zero).

use std::io::Write;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use rug::{Float, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{factorial, format_float, format_rational};

pub const DEFAULT_FLOAT_PRECISION: u32 = 256;

/// Relative error (against the running maximum of `|s(n)|`) above which
/// float evaluation gives up.
pub const FLOAT_BUDGET: f64 = 1e-6;

/// Polynomial in `n` with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
    small: Option<Vec<i64>>,
}

impl Poly {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let small = coeffs
            .iter()
            .map(|c| {
                if *c.denom() == 1 {
                    c.numer().to_i64()
                } else {
                    None
                }
            })
            .collect();
        Self { coeffs, small }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    /// `n + c`.
    fn shift(c: i64) -> Self {
        Self::from_ints(&[c, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, n: i64) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= n;
            acc += c;
        }
        acc
    }

    /// Integer value at `n` when every coefficient is a small integer and
    /// the result fits in `i64`.
    fn eval_small(&self, n: i64) -> Option<i64> {
        let cs = self.small.as_ref()?;
        let mut acc: i128 = 0;
        for &c in cs.iter().rev() {
            acc = acc.checked_mul(n as i128)?.checked_add(c as i128)?;
        }
        i64::try_from(acc).ok()
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Poly::new(out)
    }

    fn product(factors: &[Poly]) -> Poly {
        factors
            .iter()
            .fold(Poly::from_ints(&[1]), |acc, f| acc.mul(f))
    }

    fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}

#[derive(Clone, Debug)]
pub struct HolonomicRecurrence {
    pub name: String,
    lead: Poly,
    coeffs: Vec<Poly>,
    initial_values: Vec<Rational>,
    offset: i64,
    valid_from: i64,
}

/// Values `s(first), s(first+1), ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSequence {
    pub first: i64,
    pub values: Vec<Rational>,
}

impl ExactSequence {
    pub fn get(&self, n: i64) -> Option<&Rational> {
        usize::try_from(n - self.first)
            .ok()
            .and_then(|i| self.values.get(i))
    }
}

/// Float values with per-term error estimates (held at 64 bits).
#[derive(Clone, Debug)]
pub struct FloatSequence {
    pub first: i64,
    pub precision_bits: u32,
    pub values: Vec<Float>,
    pub errors: Vec<Float>,
}

impl FloatSequence {
    pub fn get(&self, n: i64) -> Option<&Float> {
        usize::try_from(n - self.first)
            .ok()
            .and_then(|i| self.values.get(i))
    }

    pub fn error(&self, n: i64) -> Option<&Float> {
        usize::try_from(n - self.first)
            .ok()
            .and_then(|i| self.errors.get(i))
    }
}

impl HolonomicRecurrence {
    /// Checks shapes: `coeffs.len()` is the order, and the seeds must reach
    /// far enough for the relation at `valid_from` to apply.
    pub fn new(
        name: impl Into<String>,
        lead: Poly,
        coeffs: Vec<Poly>,
        initial_values: Vec<Rational>,
        offset: i64,
        valid_from: i64,
    ) -> Result<Self> {
        let order = coeffs.len();
        if order == 0 {
            return Err(Error::InvalidArgument("recurrence needs order >= 1".into()));
        }
        if initial_values.len() < order {
            return Err(Error::InvalidArgument(format!(
                "{} initial values for an order-{order} recurrence",
                initial_values.len()
            )));
        }
        let first_computed = offset + initial_values.len() as i64;
        if first_computed - (order as i64) < valid_from {
            return Err(Error::InvalidArgument(
                "seeds end before the relation becomes valid".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            lead,
            coeffs,
            initial_values,
            offset,
            valid_from,
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn lead(&self) -> &Poly {
        &self.lead
    }

    /// Coefficient of `s(n+i)` on the right-hand side.
    pub fn coefficient(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    pub fn initial_values(&self) -> &[Rational] {
        &self.initial_values
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn valid_from(&self) -> i64 {
        self.valid_from
    }

    /// Index of the first returned value (negative-index seeds are hidden).
    fn first_reported(&self) -> i64 {
        self.offset.max(0)
    }

    fn check_n_max(&self, n_max: i64) -> Result<()> {
        if n_max < self.first_reported() {
            return Err(Error::InvalidArgument(format!(
                "n_max {n_max} precedes the sequence start"
            )));
        }
        Ok(())
    }

    /// Exact forward iteration up to `s(n_max)`.
    pub fn eval_exact(&self, n_max: i64) -> Result<ExactSequence> {
        self.check_n_max(n_max)?;
        let k = self.order();
        let mut values = self.initial_values.clone();
        let mut m = self.offset + values.len() as i64;
        while m <= n_max {
            let n = m - k as i64;
            let lead = self.lead.eval(n);
            if lead == 0 {
                return Err(Error::SingularRecurrence(n));
            }
            let base = values.len() - k;
            let mut acc = Rational::new();
            for (i, c) in self.coeffs.iter().enumerate() {
                acc += c.eval(n) * &values[base + i];
            }
            values.push(acc / lead);
            m += 1;
        }
        let skip = (self.first_reported() - self.offset) as usize;
        let len = (n_max - self.offset + 1) as usize;
        values.truncate(len);
        Ok(ExactSequence {
            first: self.first_reported(),
            values: values.split_off(skip),
        })
    }

    /// Float forward iteration at `prec` bits, streaming each
    /// `(n, value, error_estimate)` to `sink`.
    ///
    /// The estimate comes from a shadow run at half precision: rounding
    /// errors amplified by the recurrence scale like `2^{-prec}`, so the
    /// largest relative gap between the two runs so far, rescaled by
    /// `2^{q-prec}`, estimates the relative error of the main run. The
    /// running maximum keeps chance cancellations in the shadow from
    /// hiding accumulated error. On top of that, every arithmetic
    /// operation so far is charged one ulp of the current value.
    pub fn eval_float_with<F>(&self, n_max: i64, prec: u32, mut sink: F) -> Result<()>
    where
        F: FnMut(i64, &Float, &Float),
    {
        self.check_n_max(n_max)?;
        let shadow_prec = (prec / 2).max(64).min(prec);
        let k = self.order();
        let mut main: Vec<Float> = self
            .initial_values
            .iter()
            .map(|v| Float::with_val(prec, v))
            .collect();
        let mut shadow: Vec<Float> = self
            .initial_values
            .iter()
            .map(|v| Float::with_val(shadow_prec, v))
            .collect();
        let mut running_max = Float::new(64);
        let first = self.first_reported();
        let zero = Float::new(64);
        for (i, v) in main.iter().enumerate() {
            let idx = self.offset + i as i64;
            running_max.max_mut(&Float::with_val(64, v.abs_ref()));
            if idx >= first && idx <= n_max {
                let err = Float::with_val(64, v.abs_ref()) >> (prec as i32);
                sink(idx, v, if v.is_zero() { &zero } else { &err });
            }
        }
        // keep only the last k values (ring buffer by rotation)
        main.drain(..main.len() - k);
        shadow.drain(..shadow.len() - k);
        let mut m = self.offset + self.initial_values.len() as i64;
        let scale = shadow_prec as i32 - prec as i32;
        let ops_per_step = 2 * k as u32 + 2;
        let mut steps = 0u32;
        let mut rel_gap = Float::new(64);
        while m <= n_max {
            let n = m - k as i64;
            let next = self.float_step(n, &main, prec)?;
            let next_shadow = self.float_step(n, &shadow, shadow_prec)?;
            let gap = Float::with_val(64, &next - &next_shadow).abs();
            if !next.is_zero() {
                rel_gap.max_mut(&(gap / Float::with_val(64, next.abs_ref())));
            }
            steps += 1;
            let magnitude = Float::with_val(64, next.abs_ref());
            let mut err = Float::with_val(64, &magnitude * &rel_gap) << (scale + 6);
            err += (magnitude * (ops_per_step * steps)) >> (prec as i32);
            running_max.max_mut(&Float::with_val(64, next.abs_ref()));
            if !running_max.is_zero() && err > Float::with_val(64, &running_max * FLOAT_BUDGET) {
                return Err(Error::PrecisionExhausted(format!(
                    "{} at n={m}: estimated error {:.3e} at {prec} bits",
                    self.name,
                    err.to_f64()
                )));
            }
            sink(m, &next, &err);
            main.remove(0);
            main.push(next);
            shadow.remove(0);
            shadow.push(next_shadow);
            m += 1;
        }
        Ok(())
    }

    fn float_step(&self, n: i64, window: &[Float], prec: u32) -> Result<Float> {
        let mut acc = Float::new(prec);
        for (c, v) in self.coeffs.iter().zip(window) {
            match c.eval_small(n) {
                Some(ci) => acc += Float::with_val(prec, v * ci),
                None => acc += Float::with_val(prec, v * Float::with_val(prec, c.eval(n))),
            }
        }
        match self.lead.eval_small(n) {
            Some(0) => Err(Error::SingularRecurrence(n)),
            Some(l) => Ok(acc / l),
            None => {
                let l = self.lead.eval(n);
                if l == 0 {
                    return Err(Error::SingularRecurrence(n));
                }
                Ok(acc / Float::with_val(prec, l))
            }
        }
    }

    pub fn eval_float(&self, n_max: i64, prec: u32) -> Result<FloatSequence> {
        let mut values = Vec::new();
        let mut errors = Vec::new();
        self.eval_float_with(n_max, prec, |_, v, e| {
            values.push(v.clone());
            errors.push(e.clone());
        })?;
        Ok(FloatSequence {
            first: self.first_reported(),
            precision_bits: prec,
            values,
            errors,
        })
    }

    /// `s(n)` alone, in float mode, with its error estimate.
    pub fn value_at(&self, n: i64, prec: u32) -> Result<(Float, Float)> {
        let mut out = (Float::new(prec), Float::new(64));
        self.eval_float_with(n, prec, |m, v, e| {
            if m == n {
                out = (v.clone(), e.clone());
            }
        })?;
        Ok(out)
    }
}

/// The order-4 recurrence for `u_n` (`E(X_n+Y_n) = u_n − n`).
pub fn u_recurrence() -> HolonomicRecurrence {
    let s = Poly::shift;
    let lead = Poly::product(&[s(3), s(4), s(4)]);
    let c3 = Poly::from_ints(&[78, 63, 23, 4]);
    let c2 = Poly::product(&[Poly::from_ints(&[-1, 2]), Poly::from_ints(&[2, 3]), s(3)]).neg();
    let c1 = Poly::product(&[Poly::from_ints(&[-7, 4]), s(2), s(3)]);
    let c0 = Poly::product(&[s(1), s(2), s(3)]).neg();
    let seeds = vec![
        Rational::from(0),
        Rational::from(1),
        Rational::from(3),
        Rational::from((16, 3)),
    ];
    HolonomicRecurrence::new("u", lead, vec![c0, c1, c2, c3], seeds, 0, 0).expect("valid builtin")
}

/// The order-3 recurrence for `d_n = E D_n`.
pub fn durfee_recurrence() -> HolonomicRecurrence {
    let s = Poly::shift;
    let lead = Poly::product(&[s(2), s(3)]);
    let c2 = Poly::from_ints(&[8, 9, 3]);
    let c1 = Poly::product(&[Poly::from_ints(&[1, 3]), s(2)]).neg();
    let c0 = Poly::product(&[s(1), s(2)]);
    let seeds = vec![Rational::from(0), Rational::from(1), Rational::from(1)];
    HolonomicRecurrence::new("durfee", lead, vec![c0, c1, c2], seeds, 0, 0).expect("valid builtin")
}

/// The order-4 recurrence for `ω_{a,n} = E Φ_λ(a)`, valid for `n ≥ a − 2`
/// with `ω_{a,n} = 0` for `min(0, a−2) ≤ n ≤ a` and `ω_{a,a+1} = 1/(a+1)!`.
pub fn omega_recurrence(a: u32) -> HolonomicRecurrence {
    let s = Poly::shift;
    let ai = a as i64;
    let a2 = ai * ai;
    let lead = Poly::product(&[s(4), s(ai + 3), s(3 - ai)]);
    let c3 = Poly::from_ints(&[78 - 7 * a2, 86 - 2 * a2, 32, 4]);
    let c2 = Poly::product(&[s(3), Poly::from_ints(&[20 - a2, 22, 6])]).neg();
    let c1 = Poly::product(&[Poly::from_ints(&[4]), s(1), s(2), s(3)]);
    let c0 = Poly::product(&[s(1), s(2), s(3)]).neg();
    let offset = (ai - 2).min(0);
    let mut seeds = vec![Rational::new(); (ai - offset + 1) as usize];
    seeds.push(Rational::from((1, factorial(a + 1))));
    HolonomicRecurrence::new(
        format!("omega:{a}"),
        lead,
        vec![c0, c1, c2, c3],
        seeds,
        offset,
        ai - 2,
    )
    .expect("valid builtin")
}

/// `name` is `u`, `durfee` or `omega` (which needs `a`).
pub fn builtin(name: &str, a: Option<u32>) -> Result<HolonomicRecurrence> {
    match (name, a) {
        ("u", None) => Ok(u_recurrence()),
        ("durfee", None) => Ok(durfee_recurrence()),
        ("omega", Some(a)) => Ok(omega_recurrence(a)),
        ("omega", None) => Err(Error::InvalidArgument("omega needs a parameter a".into())),
        (other, _) => Err(Error::InvalidArgument(format!(
            "no builtin recurrence {other:?}"
        ))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub recurrence: String,
    pub range: (u32, u32),
    pub pass: bool,
    pub first_divergence: Option<u32>,
}

/// Compares the exact recurrence output with `closed_form` on `range`.
pub fn cross_check<F>(
    rec: &HolonomicRecurrence,
    closed_form: F,
    range: RangeInclusive<u32>,
) -> Result<CrossCheck>
where
    F: Fn(u32) -> Rational + Sync,
{
    let (lo, hi) = (*range.start(), *range.end());
    let seq = rec.eval_exact(hi as i64)?;
    let first_divergence = (lo..=hi)
        .into_par_iter()
        .filter(|&n| seq.get(n as i64).is_none_or(|v| *v != closed_form(n)))
        .min();
    Ok(CrossCheck {
        recurrence: rec.name.clone(),
        range: (lo, hi),
        pass: first_divergence.is_none(),
        first_divergence,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DualModeReport {
    pub recurrence: String,
    pub n_max: i64,
    pub precision_bits: u32,
    /// `max |float − exact| / |exact|` over non-zero terms.
    pub max_relative_deviation: f64,
    /// Largest `|float − exact| / estimate`; at most one when the estimate
    /// bounds the observed error.
    pub max_error_ratio: f64,
    pub estimate_holds: bool,
}

/// Runs both modes up to `n_max` and compares.
pub fn dual_mode(rec: &HolonomicRecurrence, n_max: i64, prec: u32) -> Result<DualModeReport> {
    let exact = rec.eval_exact(n_max)?;
    let float = rec.eval_float(n_max, prec)?;
    let work = prec + 64;
    let mut max_rel = 0f64;
    let mut max_ratio = 0f64;
    for ((x, f), e) in exact.values.iter().zip(&float.values).zip(&float.errors) {
        let gap = Float::with_val(work, Float::with_val(work, f) - x).abs();
        if *x != 0 {
            let rel = Float::with_val(64, &gap / Float::with_val(work, x).abs());
            max_rel = max_rel.max(rel.to_f64());
        }
        if !gap.is_zero() {
            let ratio = if e.is_zero() {
                f64::INFINITY
            } else {
                Float::with_val(64, &gap / e).to_f64()
            };
            max_ratio = max_ratio.max(ratio);
        }
    }
    Ok(DualModeReport {
        recurrence: rec.name.clone(),
        n_max,
        precision_bits: prec,
        max_relative_deviation: max_rel,
        max_error_ratio: max_ratio,
        estimate_holds: max_ratio <= 1.0,
    })
}

/// CSV with header `n,value`, values as `p/q`.
pub fn write_exact_csv<W: Write>(mut w: W, seq: &ExactSequence) -> Result<()> {
    writeln!(w, "n,value")?;
    for (i, v) in seq.values.iter().enumerate() {
        writeln!(w, "{},{}", seq.first + i as i64, format_rational(v))?;
    }
    Ok(())
}

/// CSV with header `n,value`, values with `digits` significant digits.
pub fn write_float_csv<W: Write>(mut w: W, seq: &FloatSequence, digits: usize) -> Result<()> {
    writeln!(w, "n,value")?;
    for (i, v) in seq.values.iter().enumerate() {
        writeln!(w, "{},{}", seq.first + i as i64, format_float(v, digits))?;
    }
    Ok(())
}
