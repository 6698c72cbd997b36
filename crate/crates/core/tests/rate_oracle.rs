//! The per-vertex exponent of the first moment, computed from log-gamma
//! over the exact pairing count, converges to ln f at rate O(ln n / n).

use firefighter_core::expansion::f_rate;
use statrs::function::gamma::ln_gamma;

fn ln_fact(x: f64) -> f64 {
    ln_gamma(x + 1.0)
}

fn ln_binom(a: f64, b: f64) -> f64 {
    ln_fact(a) - ln_fact(b) - ln_fact(a - b)
}

// ln E[Z] for |K| = c d n, |K'| = |K| (d+2)(1+eps)/d, continuous in the sizes.
fn ln_first_moment(c: f64, eps: f64, d: usize, n: f64) -> f64 {
    let d = d as f64;
    let k = c * d * n;
    let kp = k * (d + 2.0) / d * (1.0 + eps);
    let pts = d * (d + 2.0) * n;
    let from_k = k * (d + 2.0);
    let ln_p = ln_fact(kp * d) - ln_fact(kp * d - from_k) + ln_fact(pts - from_k) - ln_fact(pts);
    ln_binom(d * n, k) + ln_binom((d + 2.0) * n, kp) + ln_p
}

#[test]
fn first_moment_exponent_matches_f() {
    let n = 1e7;
    for d in [3usize, 4, 6] {
        for &c in &[0.1, 0.25, 0.4, 0.5] {
            for &eps in &[0.1, 0.237, 0.3] {
                if c * (1.0 + eps) >= 1.0 {
                    continue;
                }
                let oracle = ln_first_moment(c, eps, d, n) / n;
                let ln_f = f_rate(c, eps, d).unwrap().ln();
                assert!(
                    (oracle - ln_f).abs() < 1e-4,
                    "d={d} c={c} eps={eps}: {oracle} vs {ln_f}"
                );
            }
        }
    }
}

#[test]
fn exponent_error_shrinks_with_n() {
    let ln_f = f_rate(0.5, 0.237, 3).unwrap().ln();
    let err = |n: f64| (ln_first_moment(0.5, 0.237, 3, n) / n - ln_f).abs();
    assert!(err(1e6) < err(1e4));
    assert!(err(1e4) < err(1e2));
}
