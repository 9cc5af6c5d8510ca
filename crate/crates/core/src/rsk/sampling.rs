//! Seeded permutation sampling and the Monte Carlo harness.
//!
//! Every worker draws from its own ChaCha8 stream `(seed, worker)`, and the
//! per-worker moment accumulators are merged in worker order, so results
//! depend only on `(seed, workers, trials)`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rsk::rsk;

/// Counter-based generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform permutation of `1..=n` (Fisher–Yates).
pub fn sample_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u32> {
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    perm.shuffle(rng);
    perm
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Statistic {
    XPlusY,
    Durfee,
    BumpTotal,
    /// `Φ_λ(a)`.
    Profile(i64),
}

impl Statistic {
    fn evaluate(&self, shape: &Partition, bump_total: u64) -> f64 {
        match *self {
            Statistic::XPlusY => (shape.y_bump() + shape.x_bump()) as f64,
            Statistic::Durfee => shape.durfee() as f64,
            Statistic::BumpTotal => bump_total as f64,
            Statistic::Profile(a) => shape.phi(a).to_f64(),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::XPlusY => f.write_str("x_plus_y"),
            Statistic::Durfee => f.write_str("durfee"),
            Statistic::BumpTotal => f.write_str("bump_total"),
            Statistic::Profile(a) => write!(f, "profile:{a}"),
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x_plus_y" => Ok(Statistic::XPlusY),
            "durfee" => Ok(Statistic::Durfee),
            "bump_total" => Ok(Statistic::BumpTotal),
            other => other
                .strip_prefix("profile:")
                .and_then(|a| a.parse().ok())
                .map(Statistic::Profile)
                .ok_or_else(|| Error::Parse(format!("unknown statistic {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MonteCarloConfig {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub statistics: Vec<Statistic>,
}

/// One JSON record of Monte Carlo output.
#[derive(Clone, Debug, Serialize)]
pub struct Estimate {
    pub statistic: String,
    pub n: usize,
    pub trials: u64,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
    pub seed: u64,
}

/// Welford accumulator; `merge` is Chan's pairwise update, so merging
/// partial results stays numerically stable.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningMoments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / total as f64;
        self.m2 +=
            other.m2 + delta * delta * (self.count as f64 * other.count as f64) / total as f64;
        self.count = total;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance (zero for fewer than two samples).
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Runs `trials` RSK experiments on uniform permutations of `1..=n`.
pub fn monte_carlo(config: &MonteCarloConfig) -> Result<Vec<Estimate>> {
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if config.workers == 0 {
        return Err(Error::InvalidArgument("workers must be at least 1".into()));
    }
    let workers = config.workers as u64;
    let stats = &config.statistics;
    let partials: Vec<Vec<RunningMoments>> = (0..workers)
        .into_par_iter()
        .map(|w| {
            let share = config.trials / workers + u64::from(w < config.trials % workers);
            let mut rng = stream_rng(config.seed, w);
            let mut acc = vec![RunningMoments::default(); stats.len()];
            for _ in 0..share {
                let perm = sample_permutation(config.n, &mut rng);
                let out = rsk(&perm).expect("sampled permutation is valid");
                for (m, s) in acc.iter_mut().zip(stats) {
                    m.push(s.evaluate(&out.shape, out.bump_total));
                }
            }
            acc
        })
        .collect();

    let mut total = vec![RunningMoments::default(); stats.len()];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    Ok(stats
        .iter()
        .zip(total)
        .map(|(s, m)| Estimate {
            statistic: s.to_string(),
            n: config.n,
            trials: config.trials,
            mean: m.mean(),
            variance: m.variance(),
            stderr: m.stderr(),
            seed: config.seed,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_of_one() {
        assert_eq!(sample_permutation(1, &mut stream_rng(9, 0)), vec![1]);
    }

    #[test]
    fn seeded_streams_are_reproducible() {
        let a = sample_permutation(50, &mut stream_rng(42, 3));
        let b = sample_permutation(50, &mut stream_rng(42, 3));
        let c = sample_permutation(50, &mut stream_rng(42, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..100).map(|i| ((i * 37) % 11) as f64 + 0.5).collect();
        let mut whole = RunningMoments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut left = RunningMoments::default();
        let mut right = RunningMoments::default();
        xs[..33].iter().for_each(|&x| left.push(x));
        xs[33..].iter().for_each(|&x| right.push(x));
        left.merge(&right);
        assert_eq!(left.count(), 100);
        assert!((left.mean() - whole.mean()).abs() < 1e-12);
        assert!((left.variance() - whole.variance()).abs() < 1e-10);
    }

    #[test]
    fn statistic_ids_round_trip() {
        for s in [
            Statistic::XPlusY,
            Statistic::Durfee,
            Statistic::BumpTotal,
            Statistic::Profile(-3),
        ] {
            assert_eq!(s.to_string().parse::<Statistic>().unwrap(), s);
        }
        assert!("profile:x".parse::<Statistic>().is_err());
    }

    #[test]
    fn n_one_is_deterministic() {
        let cfg = MonteCarloConfig {
            n: 1,
            trials: 25,
            seed: 5,
            workers: 3,
            statistics: vec![Statistic::BumpTotal, Statistic::Durfee],
        };
        let est = monte_carlo(&cfg).unwrap();
        assert_eq!(est[0].mean, 0.0);
        assert_eq!(est[0].variance, 0.0);
        assert_eq!(est[1].mean, 1.0);
    }

    #[test]
    fn worker_count_fixes_result() {
        let cfg = MonteCarloConfig {
            n: 20,
            trials: 301,
            seed: 11,
            workers: 4,
            statistics: vec![Statistic::XPlusY],
        };
        let a = monte_carlo(&cfg).unwrap();
        let b = monte_carlo(&cfg).unwrap();
        assert_eq!(a[0].mean, b[0].mean);
        assert_eq!(a[0].variance, b[0].variance);
        assert!(monte_carlo(&MonteCarloConfig { trials: 0, ..cfg }).is_err());
    }
}
