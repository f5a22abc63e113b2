//! Reference implementations used only by the integration tests. None of
//! these share code paths with the library routines they check.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use pitt_lab::transforms::{Decay, RadialProfile};
use std::f64::consts::PI;

/// Split a positive finite double into `m * 2^e` with integer `m`.
fn decompose(t: f64) -> (u64, i64) {
    let bits = t.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    }
}

fn shift(x: BigInt, by: i64) -> BigInt {
    if by >= 0 {
        x << (by as usize)
    } else {
        x >> ((-by) as usize)
    }
}

/// `sum_k (-t^2/4)^k / (k! (alpha+1)_k)` for `alpha = twice_alpha / 2`,
/// summed exactly in scaled big-integer arithmetic.
pub fn normalized_series_exact(twice_alpha: i64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let (m, e) = decompose(t);
    let m2 = BigInt::from(m) * BigInt::from(m);
    // Fixed point with enough headroom for the largest term (about e^t).
    let scale_bits = 256 + (1.45 * t) as i64;
    let mut term = BigInt::from(1) << (scale_bits as usize);
    let mut sum = term.clone();
    let x = t * t / 4.0;
    let mut k: i64 = 1;
    loop {
        // term *= (t^2/4) / (k (alpha + k)) = m^2 2^(2e-1) / (k (twice_alpha + 2k))
        term = shift(term * &m2, 2 * e - 1);
        term /= BigInt::from(k * (twice_alpha + 2 * k));
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        if (k as f64) * (k as f64) > x && term.is_zero() {
            break;
        }
        k += 1;
    }
    let keep = 300;
    let reduced = shift(sum.clone(), -(scale_bits - keep));
    let mag = reduced.abs().to_f64().unwrap();
    let v = mag * 2f64.powi(-(keep as i32));
    if sum.is_negative() {
        -v
    } else {
        v
    }
}

/// `J_alpha(t)` for half-integer or integer `alpha = twice_alpha / 2` in
/// `{-1/2, 0, 1/2, 1, 3/2}`, with exact Gamma constants.
pub fn bessel_j_exact(twice_alpha: i64, t: f64) -> f64 {
    let h = t / 2.0;
    let sqrt_pi = PI.sqrt();
    let prefactor = match twice_alpha {
        -1 => 1.0 / (h.sqrt() * sqrt_pi),
        0 => 1.0,
        1 => h.sqrt() / (sqrt_pi / 2.0),
        2 => h,
        3 => h * h.sqrt() / (0.75 * sqrt_pi),
        _ => panic!("order not tabulated"),
    };
    prefactor * normalized_series_exact(twice_alpha, t)
}

/// Bisection on the exact series for a sign change of `j_alpha` in `[lo, hi]`.
pub fn bisect_exact(twice_alpha: i64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = normalized_series_exact(twice_alpha, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = normalized_series_exact(twice_alpha, mid);
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `n` log-spaced points covering `[a, b]`.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Composite Simpson rule on `n` (even) panels; slow but transparent.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 1 { n + 1 } else { n };
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

/// Surface measure of the unit sphere in `R^n`.
pub fn sphere_area(n: usize) -> f64 {
    // Recursion avoids any Gamma implementation.
    match n {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 2.0) * sphere_area(n - 2),
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// `sum_k c_k exp(-r^2 / (2 s_k^2))`, whose `L^2` norm is known in closed form.
pub fn mixture(terms: Vec<(f64, f64)>) -> RadialProfile {
    let widest = terms.iter().map(|t| t.1).fold(0.0, f64::max);
    RadialProfile::from_fn("mixture", Decay::Gaussian { scale: widest }, vec![], move |r: f64| {
        terms.iter().map(|(c, s)| c * (-r * r / (2.0 * s * s)).exp()).sum()
    })
    .unwrap()
}

/// `||f||_2^2` in closed form: each product of two Gaussians is a Gaussian.
pub fn mixture_norm_sq(terms: &[(f64, f64)], n: usize) -> f64 {
    let mut total = 0.0;
    for (ci, si) in terms {
        for (cj, sj) in terms {
            let s2 = si * si * sj * sj / (si * si + sj * sj);
            total += ci * cj * (2.0 * PI * s2).powf(n as f64 / 2.0);
        }
    }
    total
}
