use std::path::Path;

use plancherel::convolution::{exy_sum, omega_sum};
use plancherel::exact::rational_to_f64;
use plancherel::holonomic::{durfee_recurrence, omega_recurrence, u_recurrence};
use plancherel::rsk::{monte_carlo, Estimate, MonteCarloConfig, Statistic};
use serde::Serialize;

use crate::output::{sink, write_json, Failure};

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long)]
    n: usize,

    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Comma-separated: x_plus_y, durfee, bump_total, profile:a.
    #[arg(long, value_delimiter = ',', default_value = "x_plus_y,durfee")]
    statistics: Vec<String>,

    /// Skip the exact reference column.
    #[arg(long)]
    no_compare: bool,
}

#[derive(Serialize)]
struct Row {
    #[serde(flatten)]
    estimate: Estimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<f64>,
    /// `(mean − reference) / stderr`, when both are available.
    #[serde(skip_serializing_if = "Option::is_none")]
    z_score: Option<f64>,
}

/// Exact expectation where a formula is available.
fn reference(stat: Statistic, n: usize) -> Option<f64> {
    let n32 = u32::try_from(n).ok()?;
    let float_at = |rec: plancherel::holonomic::HolonomicRecurrence| {
        rec.value_at(n as i64, 256).ok().map(|(v, _)| v.to_f64())
    };
    match stat {
        Statistic::XPlusY if n <= 200 => Some(rational_to_f64(&exy_sum(n32))),
        Statistic::XPlusY => float_at(u_recurrence()).map(|u| u - n as f64),
        // E Y = E X = E(X+Y)/2 by conjugation symmetry
        Statistic::BumpTotal if n <= 200 => Some(rational_to_f64(&exy_sum(n32)) / 2.0),
        Statistic::BumpTotal => float_at(u_recurrence()).map(|u| (u - n as f64) / 2.0),
        Statistic::Durfee if n <= 200 => Some(rational_to_f64(&omega_sum(0, n32))),
        Statistic::Durfee => float_at(durfee_recurrence()),
        Statistic::Profile(a) => {
            let a = u32::try_from(a.unsigned_abs()).ok()?;
            if n <= 200 {
                Some(rational_to_f64(&omega_sum(a, n32)))
            } else {
                float_at(omega_recurrence(a))
            }
        }
    }
}

pub fn run(args: Args, workers: u32, out: Option<&Path>) -> Result<(), Failure> {
    let statistics = args
        .statistics
        .iter()
        .map(|s| s.parse::<Statistic>())
        .collect::<Result<Vec<_>, _>>()?;
    let config = MonteCarloConfig {
        n: args.n,
        trials: args.trials,
        seed: args.seed,
        workers: workers as usize,
        statistics: statistics.clone(),
    };
    let estimates = monte_carlo(&config)?;
    let rows: Vec<Row> = estimates
        .into_iter()
        .zip(statistics)
        .map(|(estimate, stat)| {
            let reference = if args.no_compare || args.n == 0 {
                None
            } else {
                reference(stat, args.n)
            };
            let z_score = match reference {
                Some(r) if estimate.stderr > 0.0 => Some((estimate.mean - r) / estimate.stderr),
                _ => None,
            };
            Row {
                estimate,
                reference,
                z_score,
            }
        })
        .collect();
    let mut w = sink(out)?;
    write_json(&mut *w, &rows)
}
