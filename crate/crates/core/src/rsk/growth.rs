//! Plancherel growth process: add one box to `λ ⊢ n`, reaching `μ` with
//! probability `f_μ / ((n+1) f_λ)`.

use std::collections::HashMap;

use rand::Rng;
use rug::{Integer, Rational};

use crate::partition::Partition;

/// One way of adding a box, with its exact transition probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub row: usize,
    pub col: usize,
    pub shape: Partition,
    pub probability: Rational,
}

/// All covers of `lambda` with exact probabilities; they sum to one.
///
/// Adding box `(i, j)` only changes hooks in row `i` left of `j` and in
/// column `j` above `i` (each by one), so
/// `f_μ / ((n+1) f_λ) = Π h / (h + 1)` over those boxes of `λ`.
pub fn cover_probabilities(lambda: &Partition) -> Vec<Cover> {
    let conj = lambda.conjugate();
    let covers: Vec<Cover> = lambda
        .addable_cells()
        .into_iter()
        .map(|(i, j)| {
            let mut num = Integer::from(1);
            let mut den = Integer::from(1);
            let row_hooks = (0..j).map(|c| lambda.part(i) - c as u32 - 1 + conj.part(c) - i as u32);
            let col_hooks = (0..i).map(|r| lambda.part(r) - j as u32 - 1 + conj.part(j) - r as u32);
            for h in row_hooks.chain(col_hooks) {
                num *= h;
                den *= h + 1;
            }
            Cover {
                row: i,
                col: j,
                shape: lambda.with_box_added(i),
                probability: Rational::from((num, den)),
            }
        })
        .collect();
    debug_assert_eq!(
        covers
            .iter()
            .map(|c| &c.probability)
            .fold(Rational::new(), |acc, p| acc + p),
        1
    );
    covers
}

/// Exact sampler over a finite set of rational probabilities: a uniform
/// integer below the common denominator is compared with cumulative
/// numerators, so there is no floating-point bias.
#[derive(Clone, Debug)]
struct ExactTable {
    rows: Vec<usize>,
    cumulative: Vec<Integer>,
    denominator: Integer,
}

impl ExactTable {
    fn new(covers: &[Cover]) -> Self {
        let mut denominator = Integer::from(1);
        for c in covers {
            denominator.lcm_mut(c.probability.denom());
        }
        let mut acc = Integer::new();
        let mut cumulative = Vec::with_capacity(covers.len());
        for c in covers {
            let scale = Integer::from(&denominator / c.probability.denom());
            acc += scale * c.probability.numer();
            cumulative.push(acc.clone());
        }
        debug_assert_eq!(acc, denominator);
        Self {
            rows: covers.iter().map(|c| c.row).collect(),
            cumulative,
            denominator,
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = uniform_below(&self.denominator, rng);
        let idx = self.cumulative.partition_point(|c| *c <= u);
        self.rows[idx]
    }
}

fn uniform_below<R: Rng + ?Sized>(bound: &Integer, rng: &mut R) -> Integer {
    if let Some(b) = bound.to_u64() {
        return Integer::from(rng.gen_range(0..b));
    }
    let bits = bound.significant_bits();
    let words = bits.div_ceil(64) as usize;
    loop {
        let digits: Vec<u64> = (0..words).map(|_| rng.gen()).collect();
        let mut u = Integer::from_digits(&digits, rug::integer::Order::Lsf);
        u.keep_bits_mut(bits);
        if u < *bound {
            return u;
        }
    }
}

/// One step of the growth process from `lambda`.
pub fn growth_step<R: Rng + ?Sized>(lambda: &Partition, rng: &mut R) -> Partition {
    let table = ExactTable::new(&cover_probabilities(lambda));
    lambda.with_box_added(table.sample(rng))
}

/// A growth chain started from the empty diagram. Transition tables for
/// small shapes are memoized, which matters when the chain is restarted
/// millions of times.
#[derive(Debug)]
pub struct GrowthProcess<R> {
    shape: Partition,
    rng: R,
    cache: HashMap<Partition, ExactTable>,
    cache_limit: u32,
}

impl<R: Rng> GrowthProcess<R> {
    pub fn new(rng: R) -> Self {
        Self {
            shape: Partition::empty(),
            rng,
            cache: HashMap::new(),
            cache_limit: 24,
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn reset(&mut self) {
        self.shape = Partition::empty();
    }

    pub fn step(&mut self) -> &Partition {
        let row = if self.shape.size() <= self.cache_limit {
            let table = self
                .cache
                .entry(self.shape.clone())
                .or_insert_with_key(|l| ExactTable::new(&cover_probabilities(l)));
            table.sample(&mut self.rng)
        } else {
            ExactTable::new(&cover_probabilities(&self.shape)).sample(&mut self.rng)
        };
        self.shape = self.shape.with_box_added(row);
        &self.shape
    }

    /// Restarts from the empty diagram and returns the shape after `n` steps.
    pub fn run(&mut self, n: u32) -> Partition {
        self.reset();
        for _ in 0..n {
            self.step();
        }
        self.shape.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions;
    use crate::rsk::stream_rng;

    #[test]
    fn first_steps() {
        let covers = cover_probabilities(&Partition::empty());
        assert_eq!(covers.len(), 1);
        assert_eq!(covers[0].probability, 1);
        let covers = cover_probabilities(&"1".parse().unwrap());
        let probs: Vec<Rational> = covers.iter().map(|c| c.probability.clone()).collect();
        assert_eq!(probs, vec![Rational::from((1, 2)), Rational::from((1, 2))]);
    }

    #[test]
    fn probabilities_match_syt_ratio() {
        for n in 0..=9 {
            for lambda in partitions(n) {
                let f = lambda.syt_count();
                let mut total = Rational::new();
                for c in cover_probabilities(&lambda) {
                    let direct = Rational::from((c.shape.syt_count(), Integer::from(&f * (n + 1))));
                    assert_eq!(c.probability, direct, "{lambda} -> {}", c.shape);
                    total += &c.probability;
                }
                assert_eq!(total, 1);
            }
        }
    }

    #[test]
    fn big_denominator_sampling_stays_in_range() {
        let mut rng = stream_rng(3, 0);
        let bound = Integer::from(Integer::u_pow_u(10, 40));
        for _ in 0..200 {
            let u = uniform_below(&bound, &mut rng);
            assert!(u >= 0 && u < bound);
        }
    }

    #[test]
    fn chain_grows_by_one() {
        let mut g = GrowthProcess::new(stream_rng(1, 0));
        let shape = g.run(30);
        assert_eq!(shape.size(), 30);
        let again = growth_step(&shape, &mut stream_rng(2, 0));
        assert_eq!(again.size(), 31);
    }
}
