use rug::{Float, Rational};

use plancherel::asymptotics::tilde_omega_profile;
use plancherel::convolution::{omega_sum, u_sum};
use plancherel::holonomic::{
    cross_check, dual_mode, durfee_recurrence, omega_recurrence, u_recurrence,
};
use plancherel::oracle::{Functional, Oracle, OracleCache};

#[test]
fn recurrences_match_binomial_sums() {
    let u = cross_check(&u_recurrence(), u_sum, 1..=150).unwrap();
    assert!(u.pass, "u diverges at {:?}", u.first_divergence);
    let d = cross_check(&durfee_recurrence(), |n| omega_sum(0, n), 1..=120).unwrap();
    assert!(d.pass, "durfee diverges at {:?}", d.first_divergence);
    for a in 1..=6 {
        let w = cross_check(&omega_recurrence(a), |n| omega_sum(a, n), 1..=100).unwrap();
        assert!(w.pass, "omega:{a} diverges at {:?}", w.first_divergence);
    }
}

#[test]
fn omega_sum_is_the_phi_average() {
    let oracle = Oracle::default();
    for n in 1..=14 {
        for a in 0..=5i64 {
            assert_eq!(
                oracle.expect(n, Functional::Phi(a)).unwrap(),
                omega_sum(a as u32, n),
                "a={a} n={n}"
            );
        }
    }
}

#[test]
fn exact_profile_matches_oracle_before_scaling() {
    let oracle = Oracle::default();
    let n = 12u32;
    let pts = tilde_omega_profile(n, 6, 256).unwrap();
    let scale = Float::with_val(256, Float::with_val(256, 2) / n).sqrt();
    for p in &pts {
        let unscaled = Float::with_val(256, &p.value / &scale) - Float::with_val(256, p.a) / 2u32;
        let want = Float::with_val(256, oracle.expect(n, Functional::Phi(p.a as i64)).unwrap());
        let diff = Float::with_val(256, &unscaled - &want).abs();
        assert!(diff < 1e-60, "a={}", p.a);
    }
}

#[test]
fn float_mode_tracks_exact_mode() {
    for rec in [u_recurrence(), durfee_recurrence(), omega_recurrence(3)] {
        let r = dual_mode(&rec, 600, 192).unwrap();
        assert!(
            r.estimate_holds,
            "{}: ratio {}",
            rec.name, r.max_error_ratio
        );
        assert!(r.max_relative_deviation < 1e-40);
    }
}

#[test]
fn oracle_is_independent_of_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                Oracle::default()
                    .variance_exact(22, |l| Functional::XPlusY.evaluate(l))
                    .unwrap()
            })
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn cache_round_trip() {
    let path = std::env::temp_dir().join(format!("plancherel-cache-{}.jsonl", std::process::id()));
    let _ = std::fs::remove_file(&path);
    let oracle = Oracle::default();
    {
        let mut cache = OracleCache::open(&path).unwrap();
        assert!(cache.is_empty());
        assert_eq!(
            cache.expect(&oracle, Functional::Durfee, 10).unwrap(),
            Rational::from((364859, 181440))
        );
    }
    let cache = OracleCache::open(&path).unwrap();
    assert_eq!(cache.len(), 1);
    assert_eq!(
        cache.get("durfee", 10),
        Some(&Rational::from((364859, 181440)))
    );
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn oracle_cap_is_enforced() {
    let oracle = Oracle::with_cap(20);
    assert!(oracle.expect(21, Functional::Durfee).is_err());
    assert!(Oracle::default().expect(61, Functional::Durfee).is_err());
}
