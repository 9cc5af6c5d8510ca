//! `z_n = E Σ_u log h_u` through the alternating convolution
//! `z_n = 2 Σ_{r=2}^n (−1)^r g(r) K_{r−1} C(n, r)` with
//! `g(r) = Σ_{ℓ=2}^r (−1)^ℓ ℓ² log ℓ / ((r+ℓ)! (r−ℓ)!)`.
//!
//! The terms grow roughly like `16^r` while the sum is `O(n log n)`, so the
//! evaluation runs at about four bits per unit of `n` and carries a running
//! bound on the rounding error.

use rayon::prelude::*;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial};
use crate::oracle::Certified;

/// Relative error budget; a bound above this means the precision was too low.
const BUDGET_BITS: i32 = 40;

/// `⌈4.2 n⌉ + 64` bits.
pub fn default_z_precision(n: u32) -> u32 {
    (4.2 * n as f64).ceil() as u32 + 64
}

/// `log ℓ` for `ℓ = 0..=n` (entries 0 and 1 are zero), built from the logs
/// of primes. Returns the table and a per-entry relative error bound in
/// units of `2^-prec`.
pub fn log_table(n: u32, prec: u32) -> (Vec<Float>, u32) {
    let n = n as usize;
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i;
                }
            }
        }
    }
    let mut logs: Vec<Float> = Vec::with_capacity(n + 1);
    for l in 0..=n {
        let v = if l < 2 {
            Float::new(prec)
        } else if spf[l] == l {
            Float::with_val(prec, l).ln()
        } else {
            let p = spf[l];
            Float::with_val(prec, &logs[p] + &logs[l / p])
        };
        logs.push(v);
    }
    // each factor contributes one rounding, each addition one more
    let factors = (usize::BITS - n.max(1).leading_zeros()).max(1);
    (logs, 2 * factors + 1)
}

/// `G(r) = (2r)! g(r) = Σ_{ℓ=2}^r (−1)^ℓ ℓ² C(2r, r−ℓ) log ℓ` with an upper
/// bound on `Σ_ℓ |terms|` (held at 64 bits).
fn g_scaled(r: u32, logs: &[Float], prec: u32) -> (Float, Float) {
    let mut acc = Float::new(prec);
    let mut c = Integer::from(1);
    for l in (2..=r).rev() {
        let coeff = Integer::from(&c * (l * l));
        let term = Float::with_val(prec, &logs[l as usize] * &coeff);
        if l % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        c *= r + l;
        c.div_exact_u_mut(r - l + 1);
    }
    // Σ_{ℓ≥1} ℓ² C(2r, r−ℓ) = r 4^r / 4
    let mut abs = Float::with_val(64, r);
    abs <<= 2 * r as i32 - 2;
    abs *= Float::with_val(64, r.max(2)).ln() * 1.01f64;
    (acc, abs)
}

/// `g(r)` at `prec` bits with a rounding-error bound.
pub fn g_eval(r: u32, prec: u32) -> Result<Certified> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "g(r) needs r >= 2, got {r}"
        )));
    }
    let work = prec + 2 * r + 32;
    let (logs, log_ulps) = log_table(r, work);
    let (g, abs) = g_scaled(r, &logs, work);
    let fact = factorial(2 * r);
    let value = Float::with_val(prec, g / &fact);
    let mut bound = abs * (r + log_ulps + 2);
    bound >>= work as i32;
    bound /= Float::with_val(64, &fact);
    bound += Float::with_val(64, value.abs_ref()) >> (prec as i32 - 1);
    Ok(Certified {
        value,
        error_bound: bound,
        precision_bits: prec,
    })
}

/// `c_r = 2 (−1)^r K_{r−1} C(n, r) / (2r)! = (−1)^r (2r−2)! C(n, r) / (r · r!² (r−1)!)`.
fn z_coefficient(n: u32, r: u32) -> Rational {
    let num = factorial(2 * r - 2) * binomial(n, r);
    let den = Integer::from(factorial(r).square_ref()) * factorial(r - 1) * r;
    let c = Rational::from((num, den));
    if r.is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// Evaluates `z_n` at `prec` bits. Fails with `PrecisionExhausted` when the
/// tracked error exceeds `2^-40` relative to `max(|z_n|, 1)`.
pub fn z_sum(n: u32, prec: u32) -> Result<Certified> {
    if n < 2 {
        return Ok(Certified {
            value: Float::new(prec),
            error_bound: Float::new(64),
            precision_bits: prec,
        });
    }
    let (logs, log_ulps) = log_table(n, prec);
    let parts: Vec<(Float, Float)> = (2..=n)
        .into_par_iter()
        .map(|r| {
            let (g, g_abs) = g_scaled(r, &logs, prec);
            let c = z_coefficient(n, r);
            let c_abs = Float::with_val(64, &c).abs() * 1.01f64;
            let t = Float::with_val(prec, &g * Float::with_val(prec, &c));
            // |c| · err(G)  +  two roundings on the product
            let mut err = c_abs * g_abs * (r + log_ulps + 2);
            err += Float::with_val(64, t.abs_ref()) * 4u32;
            (t, err)
        })
        .collect();
    let mut z = Float::new(prec);
    let mut err = Float::new(64);
    let mut abs = Float::new(64);
    for (t, e) in &parts {
        abs += Float::with_val(64, t.abs_ref());
        z += t;
        err += e;
    }
    err += abs * (n + 1);
    err *= 1.01f64;
    err >>= prec as i32;
    check_budget(&z, &err, n)?;
    Ok(Certified {
        value: z,
        error_bound: err,
        precision_bits: prec,
    })
}

fn check_budget(value: &Float, err: &Float, n: u32) -> Result<()> {
    let scale = Float::with_val(64, value.abs_ref()).max(&Float::with_val(64, 1));
    if *err > scale >> BUDGET_BITS {
        return Err(Error::PrecisionExhausted(format!(
            "z_{n}: error bound {} exceeds budget; raise the precision",
            err.to_f64()
        )));
    }
    Ok(())
}

/// `(2 z_n − log n!) / √n`, the sequence converging to `H`.
pub fn aep_term(n: u32, prec: u32) -> Result<Certified> {
    if n == 0 {
        return Err(Error::InvalidArgument("aep term needs n >= 1".into()));
    }
    let z = z_sum(n, prec)?;
    let (logs, log_ulps) = log_table(n, prec);
    let mut log_fact = Float::new(prec);
    for l in &logs {
        log_fact += l;
    }
    let sqrt_n = Float::with_val(prec, n).sqrt();
    let value = Float::with_val(prec, Float::with_val(prec, &z.value * 2u32) - &log_fact) / &sqrt_n;
    let mut err = Float::with_val(64, &z.error_bound * 2u32);
    err += (Float::with_val(64, &log_fact) * (n + log_ulps + 1)) >> (prec as i32);
    err /= Float::with_val(64, &sqrt_n) * 0.99f64;
    err += Float::with_val(64, value.abs_ref()) >> (prec as i32 - 2);
    Ok(Certified {
        value,
        error_bound: err,
        precision_bits: prec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(c: &Certified, expect: f64, tol: f64) -> bool {
        (c.to_f64() - expect).abs() <= tol
    }

    #[test]
    fn small_g_values() {
        let ln2 = std::f64::consts::LN_2;
        let ln3 = 3f64.ln();
        assert!(close(&g_eval(2, 128).unwrap(), ln2 / 6.0, 1e-15));
        let g3 = 4.0 * ln2 / 120.0 - 9.0 * ln3 / 720.0;
        assert!(close(&g_eval(3, 128).unwrap(), g3, 1e-15));
        assert!(g_eval(1, 64).is_err());
    }

    #[test]
    fn log_table_matches_direct_logs() {
        let (logs, ulps) = log_table(100, 200);
        for (l, v) in logs.iter().enumerate().skip(2) {
            let direct = Float::with_val(200, l).ln();
            let diff = Float::with_val(200, v - &direct).abs();
            assert!(
                diff <= (Float::with_val(64, &direct) * ulps) >> 200,
                "log {l}"
            );
        }
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn first_z_values() {
        let expect = [
            0.0,
            0.0,
            0.6931471806,
            1.329661349,
            2.238570083,
            3.209686276,
        ];
        for (n, &z) in expect.iter().enumerate() {
            let n = n as u32;
            let got = z_sum(n, default_z_precision(n)).unwrap();
            assert!(close(&got, z, 1e-9), "z_{n} = {}", got.to_f64());
        }
    }

    #[test]
    fn low_precision_is_refused() {
        assert!(matches!(z_sum(200, 80), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn aep_small_table_entries() {
        assert!(close(&aep_term(2, 128).unwrap(), 0.4901290717, 1e-10));
        assert!(close(
            &aep_term(7, default_z_precision(7)).unwrap(),
            0.8208116414,
            1e-10
        ));
    }
}
