use std::fs;
use std::path::{Path, PathBuf};

use plancherel::asymptotics::{
    fluctuation_export, tilde_omega_profile, write_profile_csv, PROFILE_PRESETS,
};

use crate::output::{sink, Failure};
use crate::Precision;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Diagram size; required unless --presets is given.
    #[arg(long, required_unless_present = "presets")]
    n: Option<u32>,

    /// Largest `a`; defaults to ⌊1.2 √(2n)⌋ (u ≤ 1.2).
    #[arg(long)]
    a_max: Option<u32>,

    /// Write one CSV per preset value of n into this directory.
    #[arg(long, conflicts_with = "n")]
    presets: Option<PathBuf>,

    /// Export differences along progressions a ≡ r (mod m) instead.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    progression: Option<u32>,

    #[command(flatten)]
    precision: Precision,
}

fn default_a_max(n: u32) -> u32 {
    (1.2 * (2.0 * n as f64).sqrt()).floor() as u32
}

fn write_one(args: &Args, n: u32, out: Option<&Path>) -> Result<(), Failure> {
    let a_max = args.a_max.unwrap_or_else(|| default_a_max(n));
    let points = tilde_omega_profile(n, a_max, args.precision.bits)?;
    let mut w = sink(out)?;
    match args.progression {
        None => write_profile_csv(&mut w, &points)?,
        Some(m) => {
            writeln!(w, "u,a,residue,difference,step")?;
            for row in fluctuation_export(&points, m)? {
                writeln!(
                    w,
                    "{:.15},{},{},{:.6e},{:.6e}",
                    row.u, row.a, row.residue, row.difference, row.step
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn run(args: Args, out: Option<&Path>) -> Result<(), Failure> {
    match (&args.presets, args.n) {
        (Some(dir), _) => {
            fs::create_dir_all(dir)?;
            for n in PROFILE_PRESETS {
                write_one(&args, n, Some(&dir.join(format!("profile_n{n}.csv"))))?;
            }
            Ok(())
        }
        (None, Some(n)) => write_one(&args, n, out),
        (None, None) => Err(Failure::Usage("give --n or --presets".into())),
    }
}
