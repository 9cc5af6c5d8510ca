//! Robinson–Schensted row insertion with bump counting.

mod growth;
mod sampling;

use std::fmt;

use crate::error::{Error, Result};
use crate::partition::Partition;

pub use growth::{cover_probabilities, growth_step, Cover, GrowthProcess};
pub use sampling::{
    monte_carlo, sample_permutation, stream_rng, Estimate, MonteCarloConfig, RunningMoments,
    Statistic,
};

/// Rows of a (partial) standard tableau. Entries need not be `1..n` for the
/// insertion tableau `P`; they are for the recording tableau `Q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StandardTableau {
    rows: Vec<Vec<u32>>,
}

/// Outcome of a single row insertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Insertion {
    /// Number of entries displaced to the next row.
    pub bumps: u32,
    /// Zero-based position of the box that was added.
    pub row: usize,
    pub col: usize,
}

impl StandardTableau {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a tableau from rows, checking shape and strict monotonicity.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let t = Self { rows };
        if t.rows.iter().any(|r| r.is_empty()) {
            return Err(Error::InvalidTableau("empty row".into()));
        }
        if t.rows.windows(2).any(|w| w[0].len() < w[1].len()) {
            return Err(Error::InvalidTableau(
                "row lengths not weakly decreasing".into(),
            ));
        }
        if !t.is_increasing() {
            return Err(Error::InvalidTableau(
                "rows or columns not strictly increasing".into(),
            ));
        }
        Ok(t)
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn shape(&self) -> Partition {
        Partition::new(self.rows.iter().map(|r| r.len() as u32).collect())
            .expect("tableau rows are weakly decreasing")
    }

    pub fn contains(&self, v: u32) -> bool {
        self.rows.iter().any(|r| r.binary_search(&v).is_ok())
    }

    /// Rows and columns strictly increase.
    pub fn is_increasing(&self) -> bool {
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
        let cols_ok = self
            .rows
            .windows(2)
            .all(|w| w[1].iter().zip(&w[0]).all(|(below, above)| above < below));
        rows_ok && cols_ok
    }

    /// Schensted row insertion of `v`.
    pub fn row_insert(&mut self, v: u32) -> Result<Insertion> {
        if self.contains(v) {
            return Err(Error::DuplicateEntry(v));
        }
        Ok(self.insert_fresh(v))
    }

    fn insert_fresh(&mut self, mut v: u32) -> Insertion {
        let mut bumps = 0;
        for (row_idx, row) in self.rows.iter_mut().enumerate() {
            let pos = row.partition_point(|&x| x < v);
            if pos == row.len() {
                row.push(v);
                return Insertion {
                    bumps,
                    row: row_idx,
                    col: pos,
                };
            }
            v = std::mem::replace(&mut row[pos], v);
            bumps += 1;
        }
        self.rows.push(vec![v]);
        Insertion {
            bumps,
            row: self.rows.len() - 1,
            col: 0,
        }
    }

    fn record(&mut self, row: usize, v: u32) {
        if row == self.rows.len() {
            self.rows.push(Vec::new());
        }
        self.rows[row].push(v);
    }
}

/// Rows separated by `/`, entries by `,`; e.g. `1,2,4/3,6/5,8/7`.
impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RskOutput {
    pub p: StandardTableau,
    pub q: StandardTableau,
    pub shape: Partition,
    pub bump_total: u64,
}

/// Runs RSK on a permutation of `1..=n` in one-line notation.
pub fn rsk(perm: &[u32]) -> Result<RskOutput> {
    validate_permutation(perm)?;
    let mut p = StandardTableau::new();
    let mut q = StandardTableau::new();
    let mut bump_total = 0u64;
    for (t, &v) in perm.iter().enumerate() {
        let ins = p.insert_fresh(v);
        bump_total += ins.bumps as u64;
        q.record(ins.row, t as u32 + 1);
    }
    let shape = p.shape();
    debug_assert_eq!(bump_total, shape.y_bump());
    Ok(RskOutput {
        p,
        q,
        shape,
        bump_total,
    })
}

fn validate_permutation(perm: &[u32]) -> Result<()> {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    for &v in perm {
        let idx = v as usize;
        if idx == 0 || idx > n {
            return Err(Error::InvalidPermutation(format!("{v} is outside 1..={n}")));
        }
        if std::mem::replace(&mut seen[idx], true) {
            return Err(Error::InvalidPermutation(format!("{v} appears twice")));
        }
    }
    Ok(())
}

/// Parses one-line notation such as `7,5,1,8,6,3,4,2`.
pub fn parse_permutation(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let perm = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("bad entry {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    validate_permutation(&perm)?;
    Ok(perm)
}

pub fn format_permutation(perm: &[u32]) -> String {
    perm.iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insertion_with_three_bumps() {
        let mut p =
            StandardTableau::from_rows(vec![vec![1, 3, 4], vec![5, 6], vec![7, 8]]).unwrap();
        let ins = p.row_insert(2).unwrap();
        assert_eq!(p.to_string(), "1,2,4/3,6/5,8/7");
        assert_eq!(
            ins,
            Insertion {
                bumps: 3,
                row: 3,
                col: 0
            }
        );
    }

    #[test]
    fn insertion_without_bumps() {
        let mut p = StandardTableau::new();
        assert_eq!(p.row_insert(5).unwrap().bumps, 0);
        assert_eq!(p.to_string(), "5");
        let ins = p.row_insert(9).unwrap();
        assert_eq!(
            ins,
            Insertion {
                bumps: 0,
                row: 0,
                col: 1
            }
        );
    }

    #[test]
    fn duplicate_rejected_even_below_first_row() {
        let mut p = StandardTableau::from_rows(vec![vec![1, 3], vec![5]]).unwrap();
        assert!(matches!(p.row_insert(5), Err(Error::DuplicateEntry(5))));
        assert!(matches!(p.row_insert(3), Err(Error::DuplicateEntry(3))));
    }

    #[test]
    fn rsk_of_75186342() {
        let out = rsk(&[7, 5, 1, 8, 6, 3, 4, 2]).unwrap();
        assert_eq!(out.p.to_string(), "1,2,4/3,6/5,8/7");
        assert_eq!(out.q.to_string(), "1,4,7/2,5/3,6/8");
        assert_eq!(out.shape.to_string(), "3,2,2,1");
        assert_eq!(out.bump_total, 9);
    }

    #[test]
    fn identity_has_one_row() {
        let perm: Vec<u32> = (1..=12).collect();
        let out = rsk(&perm).unwrap();
        assert_eq!(out.shape.parts(), &[12]);
        assert_eq!(out.bump_total, 0);
    }

    #[test]
    fn non_permutations_rejected() {
        assert!(rsk(&[1, 1]).is_err());
        assert!(rsk(&[0, 1]).is_err());
        assert!(rsk(&[1, 3]).is_err());
        assert!(parse_permutation("2,1,2").is_err());
        assert_eq!(parse_permutation("3, 1,2").unwrap(), vec![3, 1, 2]);
    }

    #[test]
    fn from_rows_validation() {
        assert!(StandardTableau::from_rows(vec![vec![2, 1]]).is_err());
        assert!(StandardTableau::from_rows(vec![vec![1, 2], vec![1]]).is_err());
        assert!(StandardTableau::from_rows(vec![vec![1], vec![2, 3]]).is_err());
    }
}
