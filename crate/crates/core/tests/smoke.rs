//! Float-mode runs far past the exact range.

use rug::Float;

use plancherel::asymptotics::{aep_model, exy_model};
use plancherel::convolution::constant_h;
use plancherel::holonomic::{durfee_recurrence, u_recurrence};

#[test]
fn million_terms_keep_error_estimate_small() {
    let n_max = 1_000_000i64;
    for rec in [u_recurrence(), durfee_recurrence()] {
        let mut worst = 0.0f64;
        let mut last = (Float::new(256), Float::new(64));
        rec.eval_float_with(n_max, 256, |n, v, e| {
            if n > 0 && !v.is_zero() {
                worst = worst.max((e.clone() / Float::with_val(64, v.abs_ref())).to_f64());
            }
            if n == n_max {
                last = (v.clone(), e.clone());
            }
        })
        .unwrap();
        assert!(
            worst < 1e-40,
            "{}: relative error estimate {worst:e}",
            rec.name
        );
        if rec.name == "u" {
            let exy = Float::with_val(256, &last.0 - n_max);
            let model = exy_model(256).eval(n_max as u64, 256);
            let res = Float::with_val(256, &exy - &model).abs().to_f64();
            assert!(res < 1e-10, "residual {res:e} at n = 1e6");
        }
    }
}

#[test]
fn aep_model_approaches_h() {
    let h = constant_h(128).to_f64();
    let v = aep_model(128).eval(10_000_000_000, 128).to_f64();
    assert!((v - h).abs() < 1e-3, "model {v} vs H {h}");
    assert!(v < h);
}
