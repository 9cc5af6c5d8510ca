//! Exact checks of the finite identities behind the convolution formulas.
//!
//! On integer arguments every series involved terminates because `p(x, r)`
//! and `q(x, r)` vanish for `r ≥ |x|` (resp. `r > |x|`), so each case is a
//! finite rational computation.

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::Serialize;

use super::{kr_constant, p_poly, q_poly};
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, format_rational};
use crate::oracle::{Functional, Oracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `x = 1 + Σ_{r≥1} C(2r,r) (−1)^r / ((1−2r)(2r+1)!) p(x,r)`
    XExpansion,
    /// `δ_{ℓ,n} = Σ_{r≥ℓ−1} (−1)^{ℓ+r+1} 2ℓ² / ((r+ℓ+1)!(r−ℓ+1)!) p(n,r)`
    KronHooks,
    /// `δ_{ℓ,n} = Σ_{r≥ℓ} (−1)^{ℓ+r} (2 − δ_{0,n}) / ((r+ℓ)!(r−ℓ)!) q(n,r)`
    KronContents,
    SumA,
    SumB,
    SumC,
    /// The harmonic-number sum.
    SumD,
    /// `E Σ_u p(h_u, r) = K_r C(n, r+1)`
    Pan,
    /// `E Σ_u q(c_u, r) = (2r)!/(r+1)! C(n, r+1)`
    Fuj,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::XExpansion,
        Identity::KronHooks,
        Identity::KronContents,
        Identity::SumA,
        Identity::SumB,
        Identity::SumC,
        Identity::SumD,
        Identity::Pan,
        Identity::Fuj,
    ];

    /// Default inclusive range of the driving parameter.
    pub fn default_range(&self) -> (u32, u32) {
        match self {
            Identity::XExpansion => (1, 50),
            Identity::KronHooks => (1, 40),
            Identity::KronContents => (0, 40),
            Identity::SumA | Identity::SumB | Identity::SumC | Identity::SumD => (2, 40),
            Identity::Pan | Identity::Fuj => (1, 20),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::XExpansion => "x-expansion",
            Identity::KronHooks => "kron-hooks",
            Identity::KronContents => "kron-contents",
            Identity::SumA => "sumA",
            Identity::SumB => "sumB",
            Identity::SumC => "sumC",
            Identity::SumD => "sumD",
            Identity::Pan => "pan",
            Identity::Fuj => "fuj",
        })
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|id| id.to_string() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown identity {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub case: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub range: (u32, u32),
    pub cases: usize,
    pub violations: usize,
    pub first_failure: Option<String>,
    pub results: Vec<CaseResult>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Evaluates `id` over the inclusive `range` of its driving parameter
/// (`x`, `ℓ` and `n` jointly, `r`, or `n`), or over the default range.
pub fn verify_identity(id: Identity, range: Option<(u32, u32)>) -> Result<IdentityReport> {
    let (lo, hi) = range.unwrap_or_else(|| id.default_range());
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty range {lo}..={hi}")));
    }
    let mut results = Vec::new();
    let mut push = |case: String, lhs: Rational, rhs: Rational| {
        results.push(CaseResult {
            case,
            pass: lhs == rhs,
            lhs: format_rational(&lhs),
            rhs: format_rational(&rhs),
        });
    };
    match id {
        Identity::XExpansion => {
            for x in lo.max(1)..=hi {
                push(format!("x={x}"), x_expansion(x), Rational::from(x));
            }
        }
        Identity::KronHooks => {
            for l in lo.max(1)..=hi {
                for n in lo.max(1)..=hi {
                    push(
                        format!("l={l},n={n}"),
                        kron_hooks(l, n),
                        Rational::from(u32::from(l == n)),
                    );
                }
            }
        }
        Identity::KronContents => {
            for l in lo..=hi {
                for n in lo..=hi {
                    push(
                        format!("l={l},n={n}"),
                        kron_contents(l, n),
                        Rational::from(u32::from(l == n)),
                    );
                }
            }
        }
        Identity::SumA | Identity::SumB | Identity::SumC | Identity::SumD => {
            for r in lo.max(2)..=hi {
                let (lhs, rhs) = gamma_sum(id, r);
                push(format!("r={r}"), lhs, rhs);
            }
        }
        Identity::Pan | Identity::Fuj => {
            let oracle = Oracle::default();
            for n in lo.max(1)..=hi {
                for r in 0..=6u32 {
                    let (functional, rhs) = if id == Identity::Pan {
                        (Functional::HookPoly(r), kr_constant(r) * binomial(n, r + 1))
                    } else {
                        let c = Rational::from((factorial(2 * r), factorial(r + 1)));
                        (Functional::ContentPoly(r), c * binomial(n, r + 1))
                    };
                    push(format!("n={n},r={r}"), oracle.expect(n, functional)?, rhs);
                }
            }
        }
    }
    let violations = results.iter().filter(|c| !c.pass).count();
    let first_failure = results.iter().find(|c| !c.pass).map(|c| c.case.clone());
    Ok(IdentityReport {
        identity: id.to_string(),
        range: (lo, hi),
        cases: results.len(),
        violations,
        first_failure,
        results,
    })
}

fn x_expansion(x: u32) -> Rational {
    let mut total = Rational::from(1);
    for r in 1..x {
        let num = binomial(2 * r, r) * p_poly(x as i64, r);
        let den = Integer::from(1 - 2 * r as i64) * factorial(2 * r + 1);
        let term = Rational::from((num, den));
        if r.is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn kron_hooks(l: u32, n: u32) -> Rational {
    let mut total = Rational::new();
    // p(n, r) = 0 once r ≥ n
    for r in l - 1..n {
        let num = p_poly(n as i64, r) * (2 * u64::from(l) * u64::from(l));
        let den = factorial(r + l + 1) * factorial(r + 1 - l);
        let term = Rational::from((num, den));
        if (l + r) % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn kron_contents(l: u32, n: u32) -> Rational {
    let weight = if n == 0 { 1u32 } else { 2 };
    let mut total = Rational::new();
    // q(n, r) = 0 once r > n
    for r in l..=n.max(l) {
        let num = q_poly(n as i64, r) * weight;
        let den = factorial(r + l) * factorial(r - l);
        let term = Rational::from((num, den));
        if (l + r).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Sums `Σ_{ℓ=2}^r (−1)^ℓ t(ℓ) / ((r+ℓ)!(r−ℓ)!)` against their closed forms.
fn gamma_sum(id: Identity, r: u32) -> (Rational, Rational) {
    let mut lhs = Rational::new();
    let mut harmonic = Rational::from(1);
    for l in 2..=r {
        harmonic += Rational::from((1, l));
        let l2 = Integer::from(l) * l;
        let t = match id {
            Identity::SumA => Rational::from(l2),
            Identity::SumB => Rational::from(l),
            Identity::SumC => Rational::from(1),
            _ => Rational::from(&harmonic - 1u32) * l2,
        };
        let term = t / (factorial(r + l) * factorial(r - l));
        if l % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let gg = factorial(r - 1) * factorial(r + 1);
    let rhs = match id {
        Identity::SumA => Rational::from((1, gg)),
        Identity::SumB => Rational::from((3 * (r - 1), gg * (2 * (2 * r - 1)))),
        Identity::SumC => Rational::from((r - 1, gg * (2 * r))),
        _ => {
            let den = Integer::from(factorial(r - 1).square_ref()) * (4 * (r - 1) * (2 * r - 1));
            Rational::from((1, den))
        }
    };
    (lhs, rhs)
}
