//! Brute-force Plancherel averages over the full enumeration of `λ ⊢ n`.
//!
//! This is the ground truth the binomial-convolution sums and the
//! recurrences are checked against. Partitions are processed in blocks
//! keyed by largest part (in parallel) and the partial sums are merged in
//! block order, so float results are reproducible too.

use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::convolution::{p_poly, q_poly};
use crate::error::{Error, Result};
use crate::exact::{factorial, format_rational, parse_rational};
use crate::partition::{partition_chunks, Partition};

pub const DEFAULT_CAP: u32 = 60;

/// Rational-valued diagram functionals with stable text ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functional {
    XPlusY,
    XMinusY,
    Durfee,
    /// `Φ_λ(a)`.
    Phi(i64),
    /// `Σ_u p(h_u, r)`.
    HookPoly(u32),
    /// `Σ_u q(c_u, r)`.
    ContentPoly(u32),
}

impl Functional {
    pub fn evaluate(&self, lambda: &Partition) -> Rational {
        match *self {
            Functional::XPlusY => Rational::from(lambda.x_bump() + lambda.y_bump()),
            Functional::XMinusY => Rational::from(lambda.x_bump() as i64 - lambda.y_bump() as i64),
            Functional::Durfee => Rational::from(lambda.durfee()),
            Functional::Phi(a) => lambda.phi(a),
            Functional::HookPoly(r) => {
                let stats = lambda.cell_stats();
                Rational::from(
                    stats
                        .hooks
                        .iter()
                        .map(|&h| p_poly(h as i64, r))
                        .sum::<Integer>(),
                )
            }
            Functional::ContentPoly(r) => {
                let stats = lambda.cell_stats();
                Rational::from(
                    stats
                        .contents
                        .iter()
                        .map(|&c| q_poly(c, r))
                        .sum::<Integer>(),
                )
            }
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::XPlusY => f.write_str("x_plus_y"),
            Functional::XMinusY => f.write_str("x_minus_y"),
            Functional::Durfee => f.write_str("durfee"),
            Functional::Phi(a) => write!(f, "phi:{a}"),
            Functional::HookPoly(r) => write!(f, "hook_poly:{r}"),
            Functional::ContentPoly(r) => write!(f, "content_poly:{r}"),
        }
    }
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown functional {s:?}"));
        match s {
            "x_plus_y" => return Ok(Functional::XPlusY),
            "x_minus_y" => return Ok(Functional::XMinusY),
            "durfee" => return Ok(Functional::Durfee),
            _ => {}
        }
        let (head, arg) = s.split_once(':').ok_or_else(bad)?;
        match head {
            "phi" => arg.parse().map(Functional::Phi).map_err(|_| bad()),
            "hook_poly" => arg.parse().map(Functional::HookPoly).map_err(|_| bad()),
            "content_poly" => arg.parse().map(Functional::ContentPoly).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// A high-precision value with an absolute error bound.
#[derive(Clone, Debug)]
pub struct Certified {
    pub value: Float,
    /// Upper bound on `|value - exact|`, held at 64 bits.
    pub error_bound: Float,
    pub precision_bits: u32,
}

impl Certified {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn bound_f64(&self) -> f64 {
        self.error_bound.to_f64()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moments {
    pub mean: Rational,
    pub second: Rational,
}

impl Moments {
    pub fn variance(&self) -> Rational {
        &self.second - Rational::from(self.mean.square_ref())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    cap: u32,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP }
    }
}

impl Oracle {
    pub fn with_cap(cap: u32) -> Self {
        Self { cap }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    fn check(&self, n: u32) -> Result<()> {
        if n > self.cap {
            return Err(Error::CapExceeded { n, cap: self.cap });
        }
        Ok(())
    }

    /// Folds `step(acc, f_λ², λ)` over every `λ ⊢ n`, block by block.
    fn fold_weighted<A, I, S, M>(&self, n: u32, init: I, step: S, merge: M) -> Result<A>
    where
        A: Send,
        I: Fn() -> A + Sync,
        S: Fn(&mut A, &Integer, &Partition) + Sync,
        M: Fn(A, A) -> A,
    {
        self.check(n)?;
        let partials: Vec<A> = partition_chunks(n)
            .into_par_iter()
            .map(|chunk| {
                let mut acc = init();
                for lambda in chunk {
                    let f = lambda.syt_count();
                    step(&mut acc, &Integer::from(f.square_ref()), &lambda);
                }
                acc
            })
            .collect();
        Ok(partials.into_iter().fold(init(), merge))
    }

    /// `Σ_{λ⊢n} (f_λ²/n!) F(λ)`, exact.
    pub fn expect_exact<F>(&self, n: u32, f: F) -> Result<Rational>
    where
        F: Fn(&Partition) -> Rational + Sync,
    {
        let sum = self.fold_weighted(
            n,
            Rational::new,
            |acc, f2, l| *acc += f(l) * f2,
            |a, b| a + b,
        )?;
        Ok(sum / factorial(n))
    }

    pub fn expect(&self, n: u32, functional: Functional) -> Result<Rational> {
        self.expect_exact(n, |l| functional.evaluate(l))
    }

    /// First and second moments in one pass.
    pub fn moments_exact<F>(&self, n: u32, f: F) -> Result<Moments>
    where
        F: Fn(&Partition) -> Rational + Sync,
    {
        let (s1, s2) = self.fold_weighted(
            n,
            || (Rational::new(), Rational::new()),
            |acc, f2, l| {
                let v = f(l);
                let w = Rational::from(&v * f2);
                acc.1 += Rational::from(&w * &v);
                acc.0 += w;
            },
            |a, b| (a.0 + b.0, a.1 + b.1),
        )?;
        let nf = factorial(n);
        Ok(Moments {
            mean: s1 / &nf,
            second: s2 / &nf,
        })
    }

    /// `E F² - (E F)²`, exact.
    pub fn variance_exact<F>(&self, n: u32, f: F) -> Result<Rational>
    where
        F: Fn(&Partition) -> Rational + Sync,
    {
        Ok(self.moments_exact(n, f)?.variance())
    }

    /// High-precision Plancherel average of a real-valued functional. `f`
    /// must return its value to within a few roundings at the requested precision.
    ///
    /// The bound charges one rounding for the weight, one for `f`, one for
    /// the product and one per accumulation, all relative to `Σ |w F|`.
    pub fn expect_numeric<F>(&self, n: u32, f: F, prec: u32) -> Result<Certified>
    where
        F: Fn(&Partition, u32) -> Float + Sync,
    {
        let nf = factorial(n);
        let (sum, abs_sum, count) = self.fold_weighted(
            n,
            || (Float::new(prec), Float::new(64), 0u64),
            |acc, f2, l| {
                let w = Float::with_val(prec, Rational::from((f2, &nf)));
                let term = w * f(l, prec);
                acc.1 += Float::with_val(64, term.abs_ref());
                acc.0 += term;
                acc.2 += 1;
            },
            |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
        )?;
        let mut bound = abs_sum * (count + 8);
        bound *= 1.01;
        bound >>= prec as i32 - 1;
        Ok(Certified {
            value: sum,
            error_bound: bound,
            precision_bits: prec,
        })
    }

    /// `E[#{u : h_u = ℓ}]` for `ℓ = 1..=n`.
    pub fn hook_multiplicities(&self, n: u32) -> Result<Vec<Rational>> {
        let len = n as usize;
        let sums = self.fold_weighted(
            n,
            || vec![Integer::new(); len],
            |acc, f2, l| {
                for h in l.cell_stats().hooks {
                    acc[h as usize - 1] += f2;
                }
            },
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )?;
        let nf = factorial(n);
        Ok(sums
            .into_iter()
            .map(|s| Rational::from((s, nf.clone())))
            .collect())
    }

    /// `Cov(L_n - L_{n-1}, L_{n-1})` for the growth process, `L = X + Y`.
    ///
    /// Pairs `λ ⊢ n-1 ⊂ μ ⊢ n` carry joint weight `f_λ f_μ / n!`; `μ` runs
    /// over the addable cells of `λ`, and adding cell `(i, j)` raises `L`
    /// by `i + j`.
    pub fn growth_covariance(&self, n: u32) -> Result<Rational> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "covariance needs n >= 2, got {n}"
            )));
        }
        self.check(n)?;
        let m = n - 1;
        // (Σ f_λ f_μ Δ, Σ f_λ f_μ Δ L_λ, Σ f_λ² L_λ)
        let (s_delta, s_delta_l, s_l) = self.fold_weighted(
            m,
            || (Integer::new(), Integer::new(), Integer::new()),
            |acc, f2, lambda| {
                let f = f2.clone().sqrt();
                let l = lambda.x_bump() + lambda.y_bump();
                for (i, j) in lambda.addable_cells() {
                    let fmu = lambda.with_box_added(i).syt_count();
                    let joint = Integer::from(&f * &fmu);
                    let delta = (i + j) as u64;
                    acc.0 += Integer::from(&joint * delta);
                    acc.1 += joint * (delta * l);
                }
                acc.2 += Integer::from(f2 * l);
            },
            |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
        )?;
        let n_fact = factorial(n);
        let m_fact = factorial(m);
        let e_delta = Rational::from((s_delta, n_fact.clone()));
        let e_delta_l = Rational::from((s_delta_l, n_fact));
        let e_l = Rational::from((s_l, m_fact));
        Ok(e_delta_l - e_delta * e_l)
    }

    /// `Σ_μ f_μ / (n f_λ)` over covers `μ ⊢ n` of `λ ⊢ n-1`, via the hook
    /// length formula for each `f_μ`. Always one.
    pub fn transition_mass(lambda: &Partition) -> Rational {
        let n = lambda.size() + 1;
        let f = lambda.syt_count();
        let total: Integer = lambda
            .addable_cells()
            .into_iter()
            .map(|(i, _)| lambda.with_box_added(i).syt_count())
            .sum();
        Rational::from((total, f * n))
    }
}

/// One line of the on-disk cache.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheRecord {
    pub functional: String,
    pub n: u32,
    pub value: String,
}

/// JSON-lines cache of exact oracle results keyed by `(functional, n)`.
#[derive(Debug)]
pub struct OracleCache {
    path: PathBuf,
    entries: HashMap<(String, u32), Rational>,
}

impl OracleCache {
    /// Loads `path` if it exists; new records are appended to it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(&path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: CacheRecord = serde_json::from_str(&line)?;
                entries.insert((rec.functional, rec.n), parse_rational(&rec.value)?);
            }
        }
        Ok(Self { path, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, functional: &str, n: u32) -> Option<&Rational> {
        self.entries.get(&(functional.to_string(), n))
    }

    pub fn insert(&mut self, functional: &str, n: u32, value: Rational) -> Result<()> {
        let rec = CacheRecord {
            functional: functional.to_string(),
            n,
            value: format_rational(&value),
        };
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        writeln!(file, "{}", serde_json::to_string(&rec)?)?;
        self.entries.insert((rec.functional, n), value);
        Ok(())
    }

    pub fn expect(&mut self, oracle: &Oracle, functional: Functional, n: u32) -> Result<Rational> {
        let id = functional.to_string();
        if let Some(v) = self.get(&id, n) {
            return Ok(v.clone());
        }
        let v = oracle.expect(n, functional)?;
        self.insert(&id, n, v.clone())?;
        Ok(v)
    }
}
