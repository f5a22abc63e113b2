//! Exact bookkeeping for the shell weight `u0(r) r^(n-1) = sum_k k^n chi_{A_k}(r)`,
//! `A_k = (k, k + k^(-n-1))`.

use super::catalog::shell_width;
use super::Weight;
use crate::numerics::{ball_volume, hurwitz_zeta};

/// Shells summed directly before switching to zeta tails.
const DIRECT_SHELLS: u64 = 2000;

pub fn counterexample_weight(n: usize) -> Weight {
    Weight::counterexample(n)
}

/// `(k + d)^n - k^n` without cancellation.
fn power_gap(n: usize, k: f64, d: f64) -> f64 {
    k.powi(n as i32) * (n as f64 * (d / k).ln_1p()).exp_m1()
}

/// `int_{A_k} r^(n-1) dr`.
pub fn shell_radial_measure(n: usize, k: u64) -> f64 {
    let k = k as f64;
    power_gap(n, k, shell_width(n, k)) / n as f64
}

/// Lebesgue measure of the spherical shell `{x : |x| in A_k}`.
pub fn shell_volume(n: usize, k: u64) -> f64 {
    let k = k as f64;
    ball_volume(n) * power_gap(n, k, shell_width(n, k))
}

/// `int_{A_k} r^(-a) u0(r) r^(n-1) dr = k^n int_k^(k + k^(-n-1)) r^(-a) dr`.
pub fn shell_power_integral(n: usize, k: u64, a: f64) -> f64 {
    let kf = k as f64;
    let x = shell_width(n, kf) / kf;
    let e = 1.0 - a;
    let inner = if e == 0.0 {
        x.ln_1p()
    } else {
        (e * x.ln_1p()).exp_m1() / e
    };
    kf.powi(n as i32) * kf.powf(e) * inner
}

fn binom_real(e: f64, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (e - i as f64) / (i + 1) as f64)
}

/// `int_0^inf r^(-a) u0(r) r^(n-1) dr`, finite exactly when `a > 0`.
pub fn counterexample_power_integral(n: usize, a: f64) -> f64 {
    if !(a > 0.0) {
        return f64::INFINITY;
    }
    let direct: f64 = (1..DIRECT_SHELLS).map(|k| shell_power_integral(n, k, a)).sum();
    // shell_k = sum_m C(1-a, m) / (1-a) k^(n+1-a-m(n+2)); for a = 1 the
    // coefficients are the limits (-1)^(m+1) / m.
    let e = 1.0 - a;
    let tail: f64 = (1..=4u32)
        .map(|m| {
            let coef = if e == 0.0 {
                if m % 2 == 1 { 1.0 / m as f64 } else { -1.0 / m as f64 }
            } else {
                binom_real(e, m) / e
            };
            let s = m as f64 * (n as f64 + 2.0) - n as f64 - 1.0 + a;
            coef * hurwitz_zeta(s, DIRECT_SHELLS)
        })
        .sum();
    direct + tail
}

/// `I(N) = int_{E_N} u0 r^(n-1) dr` with `E_N` the union of the first `N` shells.
pub fn counterexample_partial_mass(n: usize, big_n: u64) -> f64 {
    (1..=big_n)
        .map(|k| {
            let kf = k as f64;
            kf.powi(n as i32) * shell_width(n, kf)
        })
        .sum()
}

/// `int_{E_N} r^(n-1) dr`.
pub fn counterexample_set_measure(n: usize, big_n: u64) -> f64 {
    (1..=big_n).map(|k| shell_radial_measure(n, k)).sum()
}

/// The uniform bound `sum_k (k+1)^(n-1) k^(-n-1)` for [`counterexample_set_measure`].
pub fn counterexample_set_bound(n: usize) -> f64 {
    let direct: f64 = (1..DIRECT_SHELLS)
        .map(|k| {
            let k = k as f64;
            (k + 1.0).powi(n as i32 - 1) * k.powi(-(n as i32) - 1)
        })
        .sum();
    // (k+1)^(n-1) = sum_j C(n-1, j) k^j
    let tail: f64 = (0..n)
        .map(|j| binom_real(n as f64 - 1.0, j as u32) * hurwitz_zeta((n + 1 - j) as f64, DIRECT_SHELLS))
        .sum();
    direct + tail
}

/// `lambda(s) = |{x : u(x) > s}|` for `s >= 0`.
pub fn counterexample_level_measure(n: usize, s: f64) -> f64 {
    debug_assert!(s >= 0.0);
    if !s.is_finite() {
        return 0.0;
    }
    let kmin = (s.floor() + 1.0).min(1e18) as u64;
    let bv = ball_volume(n);
    let mut total = 0.0;
    // u0 = k^n r^(1-n) decreases across A_k from k, so only shells with k > s
    // meet the level set; the first few may be cut.
    let partial = 3u64;
    for k in kmin..kmin + partial {
        let kf = k as f64;
        let w = shell_width(n, kf);
        let d = if n == 1 || s == 0.0 {
            w
        } else {
            // k^n r^(1-n) > s  <=>  r < k (k/s)^(1/(n-1))
            let cut = kf * ((kf / s).ln() / (n as f64 - 1.0)).exp_m1();
            cut.min(w)
        };
        if d > 0.0 {
            total += bv * power_gap(n, kf, d);
        }
    }
    let start = kmin + partial;
    let tail: f64 = (1..=n)
        .map(|j| {
            let c = binom_real(n as f64, j as u32);
            let expo = (j * (n + 2) - n) as f64;
            c * hurwitz_zeta(expo, start)
        })
        .sum();
    total + bv * tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_integrals_match_direct_quadrature() {
        use crate::numerics::{integrate, Tolerance};
        for &(n, k, a) in &[(2usize, 1u64, 0.6), (2, 7, 0.6), (3, 4, 1.0), (1, 3, 2.5)] {
            let kf = k as f64;
            let w = shell_width(n, kf);
            let q = integrate(|r: f64| kf.powi(n as i32) * r.powf(-a), kf, kf + w, &Tolerance::default()).unwrap();
            let got = shell_power_integral(n, k, a);
            assert!((got - q.value).abs() < 1e-13 * q.value, "{got} vs {}", q.value);
        }
    }

    #[test]
    fn power_integral_below_zeta_bound() {
        let v = counterexample_power_integral(2, 0.6);
        let brute: f64 = (1..200_000u64).map(|k| shell_power_integral(2, k, 0.6)).sum();
        assert!(v < hurwitz_zeta(1.6, 1));
        assert!((v - brute).abs() < 2e-3, "{v} {brute}");
        assert_eq!(counterexample_power_integral(2, 0.0), f64::INFINITY);
    }

    #[test]
    fn level_measure_at_integers_is_a_sum_of_shells() {
        for n in [1usize, 2, 3] {
            for k in [0u64, 1, 4] {
                let big = 200_000u64;
                // leading tail |B_1| n / J of the shell volumes
                let direct: f64 = (k + 1..big).map(|j| shell_volume(n, j)).sum::<f64>()
                    + ball_volume(n) * n as f64 / (big as f64 - 0.5);
                let got = counterexample_level_measure(n, k as f64);
                assert!((got - direct).abs() < 1e-5 * direct.max(1e-3), "n={n} k={k}: {got} vs {direct}");
            }
        }
    }
}
