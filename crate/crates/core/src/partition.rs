//! Integer partitions (Young diagrams in English notation) and the cell
//! statistics that Plancherel averages are taken over.
//!
//! Boxes are addressed `(i, j)` with zero-based row `i` and column `j`; the
//! content of a box is `j - i` and its hook is `arm + leg + 1`.

use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::factorial;

/// Default working precision (bits) of [`Partition::functionals`].
pub const DEFAULT_LOG_PRECISION: u32 = 128;

/// A weakly decreasing list of positive parts. The empty partition is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
    size: u32,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts not weakly decreasing: {parts:?}"
            )));
        }
        Ok(Self::from_sorted(parts))
    }

    fn from_sorted(parts: Vec<u32>) -> Self {
        let size = parts.iter().sum();
        Self { parts, size }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of boxes.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length of row `i`, zero past the last row.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// `λ'_j = #{i : λ_i ≥ j}`.
    pub fn conjugate(&self) -> Partition {
        let width = self.part(0) as usize;
        let mut conj = vec![0u32; width];
        for &p in &self.parts {
            for c in conj.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition::from_sorted(conj)
    }

    /// Boxes in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p as usize).map(move |j| (i, j)))
    }

    pub fn cell_stats(&self) -> CellStats {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.size as usize);
        let mut contents = Vec::with_capacity(self.size as usize);
        for (i, j) in self.cells() {
            hooks.push(hook_with(self, &conj, i, j));
            contents.push(j as i64 - i as i64);
        }
        CellStats { hooks, contents }
    }

    /// Product of all hook lengths.
    pub fn hook_product(&self) -> Integer {
        let conj = self.conjugate();
        let mut prod = Integer::from(1);
        for (i, j) in self.cells() {
            prod *= hook_with(self, &conj, i, j);
        }
        prod
    }

    /// Number of standard Young tableaux, `n! / Π h_u`.
    pub fn syt_count(&self) -> Integer {
        let mut f = factorial(self.size);
        f.div_exact_mut(&self.hook_product());
        f
    }

    /// `f_λ² / n!`.
    pub fn plancherel_weight(&self) -> Rational {
        let f = self.syt_count();
        Rational::from((Integer::from(f.square_ref()), factorial(self.size)))
    }

    /// Number of RSK bumping steps, `Σ λ_ℓ (ℓ - 1)`.
    pub fn y_bump(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u64 * p as u64)
            .sum()
    }

    pub fn x_bump(&self) -> u64 {
        self.conjugate().y_bump()
    }

    /// Side of the Durfee square, `max{i : λ_i ≥ i}`.
    pub fn durfee(&self) -> u32 {
        self.parts
            .iter()
            .enumerate()
            .take_while(|&(i, &p)| p as usize > i)
            .count() as u32
    }

    /// Number of boxes of content `c`.
    pub fn content_count(&self, c: i64) -> u32 {
        // box (i, i + c) exists iff i + c ≥ 0 and λ_i > i + c
        let start = if c < 0 { (-c) as usize } else { 0 };
        self.parts
            .iter()
            .enumerate()
            .skip(start)
            .take_while(|&(i, &p)| p as i64 > i as i64 + c)
            .count() as u32
    }

    /// `Ψ_λ(a)`, the number of boxes with content `-a`.
    pub fn psi(&self, a: i64) -> u32 {
        self.content_count(-a)
    }

    /// `Φ_λ(a) = (Ψ_λ(a) + Ψ_λ(-a)) / 2`, which is `D(λ)` at `a = 0`.
    pub fn phi(&self, a: i64) -> Rational {
        if a == 0 {
            return Rational::from(self.durfee());
        }
        Rational::from((self.psi(a) + self.psi(-a), 2))
    }

    /// `(Ψ_λ(a), Φ_λ(a))`.
    pub fn profile(&self, a: i64) -> (u32, Rational) {
        (self.psi(a), self.phi(a))
    }

    /// `Σ_u log h_u` at `prec` bits (two roundings: product, then log).
    pub fn log_hook_sum(&self, prec: u32) -> Float {
        Float::with_val(prec, self.hook_product()).ln()
    }

    pub fn functionals(&self, prec: u32) -> DiagramFunctionals {
        let y = self.y_bump();
        let x = self.x_bump();
        DiagramFunctionals {
            y_bump: y,
            x_bump: x,
            x_plus_y: x + y,
            x_minus_y: x as i64 - y as i64,
            durfee: self.durfee(),
            log_hook_sum: self.log_hook_sum(prec),
        }
    }

    /// Cells `(i, λ_i)` where a box may be added.
    pub fn addable_cells(&self) -> Vec<(usize, usize)> {
        let k = self.parts.len();
        (0..=k)
            .filter(|&i| i == 0 || self.part(i - 1) > self.part(i))
            .map(|i| (i, self.part(i) as usize))
            .collect()
    }

    /// Cells `(i, λ_i - 1)` that may be removed.
    pub fn removable_cells(&self) -> Vec<(usize, usize)> {
        let k = self.parts.len();
        (0..k)
            .filter(|&i| self.part(i) > self.part(i + 1))
            .map(|i| (i, self.part(i) as usize - 1))
            .collect()
    }

    /// The partition with one box added at the end of row `row`.
    ///
    /// Panics if that cell is not addable.
    pub fn with_box_added(&self, row: usize) -> Partition {
        assert!(
            row <= self.parts.len() && (row == 0 || self.part(row - 1) > self.part(row)),
            "row {row} of {self} has no addable cell"
        );
        let mut parts = self.parts.clone();
        if row == parts.len() {
            parts.push(1);
        } else {
            parts[row] += 1;
        }
        Partition {
            parts,
            size: self.size + 1,
        }
    }

    /// Hook length of box `(i, j)`; panics if the box is not in the diagram.
    pub fn hook(&self, i: usize, j: usize) -> u32 {
        assert!(
            j < self.part(i) as usize,
            "({i}, {j}) is not a box of {self}"
        );
        let leg = self.parts[i + 1..]
            .iter()
            .take_while(|&&p| p as usize > j)
            .count();
        self.part(i) - j as u32 - 1 + leg as u32 + 1
    }
}

fn hook_with(lambda: &Partition, conj: &Partition, i: usize, j: usize) -> u32 {
    (lambda.part(i) - j as u32 - 1) + (conj.part(j) - i as u32 - 1) + 1
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, p) in self.parts.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad part {t:?} in {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

/// Hook lengths and contents, one entry per box in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellStats {
    pub hooks: Vec<u32>,
    pub contents: Vec<i64>,
}

impl CellStats {
    pub fn hook_sum(&self) -> u64 {
        self.hooks.iter().map(|&h| h as u64).sum()
    }

    pub fn content_sum(&self) -> i64 {
        self.contents.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagramFunctionals {
    pub y_bump: u64,
    pub x_bump: u64,
    pub x_plus_y: u64,
    pub x_minus_y: i64,
    pub durfee: u32,
    pub log_hook_sum: Float,
}

/// Partitions of `n` in descending lexicographic order.
pub fn partitions(n: u32) -> Partitions {
    let first = if n == 0 { Vec::new() } else { vec![n] };
    Partitions {
        next: Some(first),
        fixed_first: false,
    }
}

/// Partitions of `n` whose largest part is exactly `m`, in descending
/// lexicographic order. These blocks, for `m = n, n-1, ..., 1`, concatenate
/// to [`partitions`]`(n)`.
pub fn partitions_with_largest_part(n: u32, m: u32) -> Partitions {
    let next = if n == 0 && m == 0 {
        Some(Vec::new())
    } else if m == 0 || m > n {
        None
    } else {
        let mut first = vec![m];
        fill(&mut first, n - m, m);
        Some(first)
    };
    Partitions {
        next,
        fixed_first: true,
    }
}

/// Disjoint blocks covering all partitions of `n`, keyed by largest part.
pub fn partition_chunks(n: u32) -> Vec<Partitions> {
    if n == 0 {
        return vec![partitions(0)];
    }
    (1..=n)
        .rev()
        .map(|m| partitions_with_largest_part(n, m))
        .collect()
}

fn fill(parts: &mut Vec<u32>, mut rem: u32, max: u32) {
    while rem > 0 {
        let p = rem.min(max);
        parts.push(p);
        rem -= p;
    }
}

#[derive(Clone, Debug)]
pub struct Partitions {
    next: Option<Vec<u32>>,
    fixed_first: bool,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        let floor = usize::from(self.fixed_first);
        // rightmost part greater than one, not touching a pinned first part
        if let Some(i) = current.iter().rposition(|&p| p > 1).filter(|&i| i >= floor) {
            let mut succ = current[..=i].to_vec();
            let ones = (current.len() - i - 1) as u32;
            succ[i] -= 1;
            let max = succ[i];
            fill(&mut succ, ones + 1, max);
            self.next = Some(succ);
        }
        Some(Partition::from_sorted(current))
    }
}
