use std::path::Path;

use plancherel::asymptotics::{aep_model, heuristic_constants};
use plancherel::convolution::{
    constant_h, constant_hprime0, cross_identity_h, d_sum, exy_sum, omega_sum, remark_constant,
    u_sum, verify_identity, z_sum, ConstantReport, Identity,
};
use plancherel::holonomic::{
    cross_check, dual_mode, durfee_recurrence, omega_recurrence, u_recurrence, HolonomicRecurrence,
};
use plancherel::oracle::{Functional, Oracle};
use plancherel::partition::partitions;
use rug::{Float, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{sink, write_json, Failure};

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long, value_enum)]
    suite: Suite,

    /// Inclusive range `lo:hi` of the driving parameter, overriding the
    /// suite defaults (identities and recurrences).
    #[arg(long, value_parser = parse_range)]
    range: Option<(u32, u32)>,

    /// Largest n for oracle-vs-formulas.
    #[arg(long, default_value_t = 16)]
    n_max: u32,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    Identities,
    OracleVsFormulas,
    Recurrences,
    Constants,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: Value,
}

#[derive(Serialize)]
struct Report {
    suite: Suite,
    passed: bool,
    first_failure: Option<String>,
    checks: Vec<Check>,
}

fn check(name: impl Into<String>, passed: bool, detail: Value) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

fn identities(range: Option<(u32, u32)>) -> Result<Vec<Check>, Failure> {
    let mut checks = Vec::new();
    for id in Identity::ALL {
        let r = verify_identity(id, range)?;
        checks.push(check(
            id.to_string(),
            r.passed(),
            json!({"range": r.range, "cases": r.cases, "violations": r.violations, "first_failure": r.first_failure}),
        ));
    }
    Ok(checks)
}

fn oracle_vs_formulas(n_max: u32) -> Result<Vec<Check>, Failure> {
    let oracle = Oracle::default();
    let mut checks = Vec::new();
    let exact = |checks: &mut Vec<Check>, name: String, got: Rational, want: Rational| {
        let ok = got == want;
        checks.push(check(
            name,
            ok,
            json!({"oracle": got.to_string(), "formula": want.to_string()}),
        ));
    };
    for n in 1..=n_max {
        exact(
            &mut checks,
            format!("x_plus_y n={n}"),
            oracle.expect(n, Functional::XPlusY)?,
            exy_sum(n),
        );
        exact(
            &mut checks,
            format!("x_minus_y n={n}"),
            oracle.expect(n, Functional::XMinusY)?,
            Rational::new(),
        );
        exact(
            &mut checks,
            format!("durfee n={n}"),
            oracle.expect(n, Functional::Durfee)?,
            d_sum(n),
        );
        for a in 1..=4u32 {
            exact(
                &mut checks,
                format!("phi:{a} n={n}"),
                oracle.expect(n, Functional::Phi(a as i64))?,
                omega_sum(a, n),
            );
        }
        let var = oracle.variance_exact(n, |l| Functional::XMinusY.evaluate(l))?;
        exact(
            &mut checks,
            format!("var:x_minus_y n={n}"),
            var,
            Rational::from(n * n.saturating_sub(1) / 2),
        );
        if n >= 2 {
            let mass_ok = partitions(n - 1).all(|l| Oracle::transition_mass(&l) == 1);
            checks.push(check(format!("transition mass n={n}"), mass_ok, json!({})));
        }
    }
    for n in 1..=n_max.min(14) {
        let prec = 160;
        let o = oracle.expect_numeric(n, |l, p| l.log_hook_sum(p), prec)?;
        let s = z_sum(n, 64 + (4.2 * n as f64).ceil() as u32 + 96)?;
        let gap = Float::with_val(prec, &o.value - &s.value).abs();
        let allowed = Float::with_val(64, &o.error_bound + &s.error_bound);
        checks.push(check(
            format!("z n={n}"),
            gap <= allowed,
            json!({"oracle": o.to_f64(), "formula": s.to_f64(), "gap": gap.to_f64(), "allowed": allowed.to_f64()}),
        ));
    }
    Ok(checks)
}

type ClosedForm = Box<dyn Fn(u32) -> Rational + Sync>;

fn recurrences(range: Option<(u32, u32)>) -> Result<Vec<Check>, Failure> {
    let (lo, hi) = range.unwrap_or((1, 100));
    let mut recs: Vec<(HolonomicRecurrence, ClosedForm)> = vec![
        (u_recurrence(), Box::new(u_sum)),
        (durfee_recurrence(), Box::new(|n| omega_sum(0, n))),
    ];
    for a in 1..=5u32 {
        recs.push((omega_recurrence(a), Box::new(move |n| omega_sum(a, n))));
    }
    let mut checks = Vec::new();
    for (rec, closed) in &recs {
        let c = cross_check(rec, closed, lo..=hi)?;
        checks.push(check(
            format!("{} exact vs sum", rec.name),
            c.pass,
            json!({"range": c.range, "first_divergence": c.first_divergence}),
        ));
        let d = dual_mode(rec, 1000, 256)?;
        checks.push(check(
            format!("{} float vs exact", rec.name),
            d.estimate_holds,
            serde_json::to_value(&d)?,
        ));
    }
    Ok(checks)
}

fn constant_check(name: &str, r: &ConstantReport, target: f64, tol: f64) -> Check {
    let v = r.to_f64();
    check(
        name,
        (v - target).abs() <= tol,
        json!({"value": r.to_f64(), "target": target, "tolerance": tol, "report": r}),
    )
}

fn constants() -> Result<Vec<Check>, Failure> {
    let prec = 128;
    let h = constant_h(prec);
    let mut checks = vec![
        constant_check("H", &h, 1.87702830628, 1e-10),
        constant_check("hprime0", &constant_hprime0(prec), 0.001562493, 1e-8),
        constant_check("H via h(1/2)", &cross_identity_h(prec), h.to_f64(), 1e-10),
        constant_check("aep coefficient", &remark_constant(prec), 1.792693, 1e-6),
    ];
    let m = aep_model(prec).eval(2048, prec).to_f64();
    checks.push(check(
        "aep model at 2048",
        (m - 1.746154).abs() <= 1e-5,
        json!({"value": m, "target": 1.746154}),
    ));
    let hc = heuristic_constants()?;
    checks.push(check(
        "heuristic variance constant",
        (hc.variance_constant - 0.01496867061).abs() <= 1e-9 && hc.max_deviation <= 1e-9,
        serde_json::to_value(&hc)?,
    ));
    Ok(checks)
}

pub fn run(args: Args, out: Option<&Path>) -> Result<(), Failure> {
    let checks = match args.suite {
        Suite::Identities => identities(args.range)?,
        Suite::OracleVsFormulas => oracle_vs_formulas(args.n_max)?,
        Suite::Recurrences => recurrences(args.range)?,
        Suite::Constants => constants()?,
    };
    let first_failure = checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
    let report = Report {
        suite: args.suite,
        passed: first_failure.is_none(),
        first_failure,
        checks,
    };
    let mut w = sink(out)?;
    write_json(&mut *w, &report)?;
    match report.first_failure {
        None => Ok(()),
        Some(name) => Err(Failure::Validation(Some(format!(
            "first failing case: {name}"
        )))),
    }
}
