//! The AEP constant `H`, `h'(0)` and `h(1/2)` as tail-corrected series.
//!
//! All three series are built from `e_ℓ = log ℓ − H_ℓ + γ + 1/(2ℓ)`, which
//! has the enveloping expansion `e_ℓ ~ Σ_k b_k ℓ^{−2k}` with
//! `b_k = B_{2k}/(2k)`. Terms `ℓ ≤ L` are summed directly; the rest is
//! expanded in powers of `ℓ^{−2}` and summed against `ζ(s) − Σ_{ℓ≤L} ℓ^{−s}`.
//!
//! With `K` expansion terms the remainder of `w(ℓ) e_ℓ`, `w = ℓ²/(4ℓ²−1)`,
//! is at most `ℓ^{−2K−2} (|b_{K+1}| + Σ_{k≤K} |b_k| 4^{k−K−1}) / 3`, and
//! `Σ_{ℓ>L} ℓ^{−2K−2} ≤ L^{−2K−1} / (2K+1)`.

use rug::float::Constant;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::exact::serde_float;

/// A series constant with its truncation bound and total error bound
/// (truncation plus rounding).
#[derive(Clone, Debug, Serialize)]
pub struct ConstantReport {
    pub name: String,
    #[serde(with = "serde_float")]
    pub value: Float,
    pub precision_bits: u32,
    /// Number of explicitly summed terms `L`.
    pub terms_used: u32,
    #[serde(with = "serde_float")]
    pub tail_bound: Float,
    #[serde(with = "serde_float")]
    pub error_bound: Float,
}

impl ConstantReport {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// `L` used by the default entry points.
pub fn default_terms(prec: u32) -> u32 {
    4 * prec.max(64)
}

const MAX_ORDER: usize = 120;

/// `b_k = B_{2k} / (2k)` for `k = 0..=k_max` (entry 0 unused).
fn bernoulli_b(k_max: usize) -> Vec<Rational> {
    let m_max = 2 * k_max;
    let mut b: Vec<Rational> = Vec::with_capacity(m_max + 1);
    b.push(Rational::from(1));
    for m in 1..=m_max {
        let mut s = Rational::new();
        let mut c = Integer::from(1);
        for (k, bk) in b.iter().enumerate() {
            // c = C(m+1, k)
            s += Rational::from(bk * &c);
            c *= m + 1 - k;
            c /= k + 1;
        }
        b.push(-s / (m as u32 + 1));
    }
    (0..=k_max)
        .map(|k| {
            if k == 0 {
                Rational::new()
            } else {
                Rational::from(&b[2 * k] / (2 * k as u32))
            }
        })
        .collect()
}

/// Everything the three constants need from one pass over `ℓ ≤ L`.
struct Series {
    l_max: u32,
    work: u32,
    /// `Σ_{ℓ=2}^L w e_ℓ`
    head_h: Float,
    /// `Σ_{ℓ=2}^L ℓ (e_ℓ − b_1 ℓ^{−2})`
    head_hp: Float,
    /// `Σ_{ℓ=2}^L (−1)^ℓ ℓ² (e_ℓ − b_1 ℓ^{−2}) / (Γ(ℓ+3/2) Γ(3/2−ℓ))`
    head_half: Float,
    /// `Σ_{m≤K} a_m ζ_L(2m)` with `a_m = Σ_{k≤m} b_k 4^{k−m−1}`
    tail_h: Float,
    /// `Σ_{2≤k≤K} b_k ζ_L(2k−1)`
    tail_hp: Float,
    bound_h: Float,
    bound_hp: Float,
    rounding: Float,
}

fn f64_bound(x: f64) -> Float {
    Float::with_val(64, x)
}

/// Tail bounds (for `Σ w e` and for `Σ ℓ e`) with `k` expansion terms.
fn tail_bounds(b_abs: &[Float], k: usize, l: u32) -> (Float, Float) {
    let mut inner = b_abs[k + 1].clone();
    for (j, bj) in b_abs.iter().enumerate().take(k + 1).skip(1) {
        inner += Float::with_val(64, bj >> (2 * (k + 1 - j)) as i32);
    }
    let ln_l = Float::with_val(64, l).ln();
    let pow_h = Float::with_val(64, -(2 * k as i32 + 1) * ln_l.clone()).exp();
    let h = inner / 3u32 * pow_h / (2 * k as u32 + 1);
    let pow_hp = Float::with_val(64, -(2 * k as i32) * ln_l).exp();
    let hp = Float::with_val(64, &b_abs[k + 1] * pow_hp) / (2 * k as u32);
    (h * 1.01f64, hp * 1.01f64)
}

impl Series {
    fn compute(l_max: u32, prec: u32) -> Self {
        let l_max = l_max.max(4);
        let log2_l = 32 - l_max.leading_zeros();
        let work = prec + 3 * log2_l + 64;
        let target = f64_bound(1.0) >> (prec as i32 + 4);

        let b = bernoulli_b(MAX_ORDER + 1);
        let b_abs: Vec<Float> = b.iter().map(|x| Float::with_val(64, x).abs()).collect();
        let mut order = 1;
        let mut best = None::<(usize, Float)>;
        for k in 1..=MAX_ORDER {
            let (h, hp) = tail_bounds(&b_abs, k, l_max);
            let worst = h.max(&hp);
            if best.as_ref().is_none_or(|(_, w)| worst < *w) {
                best = Some((k, worst.clone()));
                order = k;
            } else {
                break;
            }
            if worst < target {
                break;
            }
        }
        let (bound_h, bound_hp) = tail_bounds(&b_abs, order, l_max);

        let gamma = Float::with_val(work, Constant::Euler);
        let b1 = Float::with_val(work, &b[1]);
        let three_half = Float::with_val(work, 1.5);
        let mut harmonic = Float::with_val(work, 1);
        let mut head_h = Float::new(work);
        let mut head_hp = Float::new(work);
        let mut head_half = Float::new(work);
        // Σ_{ℓ≤L} ℓ^{−s} for s = 1..=2K
        let mut power_sums = vec![Float::new(work); 2 * order + 1];
        for s in power_sums.iter_mut().skip(1) {
            *s += 1u32;
        }
        for l in 2..=l_max {
            harmonic += Float::with_val(work, l).recip();
            let lf = Float::with_val(work, l);
            let mut e = Float::with_val(work, lf.ln_ref());
            e -= &harmonic;
            e += &gamma;
            e += Float::with_val(work, 2 * l).recip();

            let l2 = u64::from(l) * u64::from(l);
            let w = Float::with_val(work, Rational::from((l2, 4 * l2 - 1)));
            head_h += Float::with_val(work, &w * &e);

            let reduced = Float::with_val(work, &e - Float::with_val(work, &b1 / l2));
            head_hp += Float::with_val(work, &reduced * l);

            let g1 = Float::with_val(work, &lf + &three_half).gamma();
            let g2 = Float::with_val(work, &three_half - &lf).gamma();
            let mut t = Float::with_val(work, &reduced * l2);
            t /= g1 * g2;
            if l % 2 == 0 {
                head_half += t;
            } else {
                head_half -= t;
            }

            let inv = lf.recip();
            let mut p = Float::with_val(work, 1);
            for s in power_sums.iter_mut().skip(1) {
                p *= &inv;
                *s += &p;
            }
        }

        let zeta_l = |s: usize| {
            Float::with_val(
                work,
                Float::with_val(work, s as u32).zeta() - &power_sums[s],
            )
        };
        let mut tail_h = Float::new(work);
        let mut a_abs_sum = f64_bound(0.0);
        for m in 1..=order {
            let mut a = Rational::new();
            for (k, bk) in b.iter().enumerate().take(m + 1).skip(1) {
                a += Rational::from(bk >> (2 * (m - k + 1)) as i32);
            }
            a_abs_sum += Float::with_val(64, &a).abs();
            tail_h += Float::with_val(work, &a) * zeta_l(2 * m);
        }
        let mut tail_hp = Float::new(work);
        for (k, bk) in b.iter().enumerate().take(order + 1).skip(2) {
            a_abs_sum += Float::with_val(64, bk).abs();
            tail_hp += Float::with_val(work, bk) * zeta_l(2 * k - 1);
        }

        // crude rounding budget: every e_ℓ is good to (ℓ + 4)(log L + 2)
        // ulps at `work` bits, the h'(0) head multiplies by ℓ, and each
        // ζ_L costs about L + 2 roundings
        let l_f = Float::with_val(64, l_max);
        let mut rounding = Float::with_val(64, &l_f * &l_f) * &l_f;
        rounding *= Float::with_val(64, l_f.ln_ref()) + 4u32;
        rounding *= 4u32;
        rounding += a_abs_sum * (l_max + 4) * 2u32;
        rounding >>= work as i32;

        Self {
            l_max,
            work,
            head_h,
            head_hp,
            head_half,
            tail_h,
            tail_hp,
            bound_h,
            bound_hp,
            rounding,
        }
    }

    /// `Σ_{ℓ≥2} w e_ℓ` with its error bound.
    fn sum_h(&self) -> (Float, Float) {
        (
            Float::with_val(self.work, &self.head_h + &self.tail_h),
            self.bound_h.clone(),
        )
    }

    fn report(&self, name: &str, value: Float, tail: Float, prec: u32) -> ConstantReport {
        let mut error = Float::with_val(64, &tail + &self.rounding);
        error += Float::with_val(64, value.abs_ref()) >> (prec as i32);
        ConstantReport {
            name: name.to_string(),
            value: Float::with_val(prec, value),
            precision_bits: prec,
            terms_used: self.l_max,
            tail_bound: tail,
            error_bound: error * 1.01f64,
        }
    }

    /// `H = 16/(3π²)(4γ+1) + 64/π² Σ w e_ℓ`.
    fn h(&self, prec: u32) -> ConstantReport {
        let work = self.work;
        let pi2 = Float::with_val(work, Constant::Pi).square();
        let gamma = Float::with_val(work, Constant::Euler);
        let (s, bound) = self.sum_h();
        let first =
            Float::with_val(work, Float::with_val(work, &gamma * 4u32) + 1u32) * 16u32 / 3u32;
        let value = (first + s * 64u32) / &pi2;
        let tail = Float::with_val(64, bound * 64u32) / 9.8f64;
        self.report("H", value, tail, prec)
    }

    /// `h'(0) = −Σ_{ℓ≥2} ℓ (e_ℓ − 1/(12ℓ²))`.
    fn hprime0(&self, prec: u32) -> ConstantReport {
        let value = -Float::with_val(self.work, &self.head_hp + &self.tail_hp);
        self.report("hprime0", value, self.bound_hp.clone(), prec)
    }

    /// `h(1/2)`: gamma-function head plus `−(4/π) Σ_{ℓ>L} w (e_ℓ − b_1 ℓ^{−2})`
    /// for the tail, using `Σ_{ℓ>L} 1/(4ℓ²−1) = 1/(2(2L+1))`.
    fn h_half(&self, prec: u32) -> ConstantReport {
        let work = self.work;
        let pi = Float::with_val(work, Constant::Pi);
        let b1_tail = Float::with_val(
            work,
            Rational::from((1, 24 * (2 * u64::from(self.l_max) + 1))),
        );
        let tail_value = -(Float::with_val(work, &self.tail_h - b1_tail) * 4u32) / &pi;
        let value = Float::with_val(work, &self.head_half + tail_value);
        let tail = Float::with_val(64, &self.bound_h * 4u32) / 3.1f64;
        self.report("h_half", value, tail, prec)
    }
}

pub fn constant_h(prec: u32) -> ConstantReport {
    constant_h_with_terms(default_terms(prec), prec)
}

/// `H` with `l_max` explicit terms; the expansion order is picked to push
/// the tail below `2^{−prec}` when `l_max` allows it.
pub fn constant_h_with_terms(l_max: u32, prec: u32) -> ConstantReport {
    Series::compute(l_max, prec).h(prec)
}

pub fn constant_hprime0(prec: u32) -> ConstantReport {
    Series::compute(default_terms(prec), prec).hprime0(prec)
}

pub fn constant_h_half(prec: u32) -> ConstantReport {
    Series::compute(default_terms(prec), prec).h_half(prec)
}

/// `(8/(9π²))(24γ + 7 − 18π h(1/2))`, which must equal `H`.
pub fn cross_identity_h(prec: u32) -> ConstantReport {
    let series = Series::compute(default_terms(prec), prec);
    let half = series.h_half(prec);
    let work = series.work;
    let pi = Float::with_val(work, Constant::Pi);
    let gamma = Float::with_val(work, Constant::Euler);
    let mut inner = Float::with_val(work, &gamma * 24u32) + 7u32;
    inner -= Float::with_val(work, &pi * &half.value) * 18u32;
    let value = inner * 8u32 / (Float::with_val(work, pi.square_ref()) * 9u32);
    // d/dh(1/2) of the expression is −16/(π) ≈ −5.1
    let tail = Float::with_val(64, &half.tail_bound * 6u32);
    let mut report = series.report("H_via_h_half", value, tail, prec);
    report.error_bound += Float::with_val(64, &half.error_bound * 6u32);
    report
}

/// `13γ/12 + log √(2π) + 1/4 − h'(0)`, the coefficient of `n^{−1/2}` in the
/// AEP expansion (next to `(13/24) log n`).
pub fn remark_constant(prec: u32) -> ConstantReport {
    let series = Series::compute(default_terms(prec), prec);
    let hp = series.hprime0(prec);
    let work = series.work;
    let gamma = Float::with_val(work, Constant::Euler);
    let two_pi = Float::with_val(work, Constant::Pi) * 2u32;
    let mut value = gamma * 13u32 / 12u32;
    value += two_pi.ln() / 2u32;
    value += 0.25f64;
    value -= &hp.value;
    let mut report = series.report("aep_coefficient", value, hp.tail_bound.clone(), prec);
    report.error_bound += &hp.error_bound;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_start() {
        let b = bernoulli_b(4);
        assert_eq!(b[1], Rational::from((1, 12)));
        assert_eq!(b[2], Rational::from((-1, 120)));
        assert_eq!(b[3], Rational::from((1, 252)));
        assert_eq!(b[4], Rational::from((-1, 240)));
    }

    #[test]
    fn h_and_hprime_values() {
        let h = constant_h(128);
        assert!((h.to_f64() - 1.87702830628).abs() < 1e-10, "{}", h.to_f64());
        assert!(h.error_bound < 1e-30);
        let hp = constant_hprime0(128);
        assert!((hp.to_f64() - 0.001562493).abs() < 1e-8, "{}", hp.to_f64());
    }

    #[test]
    fn half_value_agrees_through_identity() {
        let h = constant_h(96);
        let cross = cross_identity_h(96);
        let diff = Float::with_val(96, &h.value - &cross.value).abs();
        assert!(
            diff <= Float::with_val(64, &h.error_bound + &cross.error_bound),
            "{}",
            diff.to_f64()
        );
    }

    #[test]
    fn doubling_terms_stays_inside_bound() {
        let mut prev = constant_h_with_terms(6, 128);
        for l in [12, 24, 48, 96] {
            let next = constant_h_with_terms(l, 128);
            let moved = Float::with_val(128, &next.value - &prev.value).abs();
            assert!(
                moved <= prev.error_bound,
                "L={l}: moved {} > {}",
                moved.to_f64(),
                prev.error_bound.to_f64()
            );
            prev = next;
        }
    }

    #[test]
    fn report_serializes_decimal_strings() {
        let json = serde_json::to_value(constant_h(64)).unwrap();
        assert_eq!(json["name"], "H");
        assert!(json["value"].as_str().unwrap().starts_with("1.877028306"));
        assert_eq!(json["precision_bits"], 64);
    }
}
