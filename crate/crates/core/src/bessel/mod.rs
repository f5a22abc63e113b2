//! Bessel functions of the first kind for real order `alpha >= -1/2` and
//! non-negative argument, together with the normalized kernel
//! `j_alpha(t) = Gamma(alpha + 1) (t / 2)^(-alpha) J_alpha(t)` and its zeros.
//!
//! Two regimes are used. For `t <= 25` (or when the order exceeds the
//! argument) the ascending series is summed in double-double arithmetic, which
//! absorbs the cancellation between its alternating terms. Beyond that the
//! Hankel expansion is evaluated for a base order in `[-1/2, 3/2)` and the
//! forward three-term recurrence climbs to the requested order; the recurrence
//! is stable because the order stays below the argument there.

mod dd;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use dd::Dd;

/// Arguments at or below this value are handled by the power series.
const SERIES_LIMIT: f64 = 25.0;

/// Scan step for bracketing zeros; consecutive zeros are more than 3 apart
/// for every order `alpha >= -1/2`.
const ZERO_SCAN_STEP: f64 = 0.5;

/// Order of a Bessel function, restricted to `alpha >= -1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < -0.5 {
            return Err(Error::Domain(format!(
                "Bessel order must be finite and >= -1/2, got {alpha}"
            )));
        }
        Ok(BesselOrder(alpha))
    }

    /// The order `n/2 - 1` of the radial Fourier kernel in dimension `n`.
    pub fn for_dimension(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        BesselOrder(n as f64 / 2.0 - 1.0)
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    /// `J_alpha(t)` for `t >= 0`; negative arguments are reflected.
    pub fn j(self, t: f64) -> f64 {
        let t = t.abs();
        let alpha = self.0;
        if t == 0.0 {
            return if alpha == 0.0 {
                1.0
            } else if alpha > 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
        }
        if t <= SERIES_LIMIT || alpha >= t {
            series_prefactor(alpha, t) * normalized_series(alpha, t).to_f64()
        } else {
            large_argument(alpha, t)
        }
    }

    /// `j_alpha(t)`, equal to 1 at the origin; even in `t`.
    pub fn normalized(self, t: f64) -> f64 {
        let t = t.abs();
        let alpha = self.0;
        if t <= SERIES_LIMIT || alpha >= t {
            return normalized_series(alpha, t).to_f64();
        }
        let jv = large_argument(alpha, t);
        if alpha == 0.0 {
            jv
        } else if alpha + 1.0 < 100.0 {
            gamma(alpha + 1.0) * (t / 2.0).powf(-alpha) * jv
        } else {
            (ln_gamma(alpha + 1.0) - alpha * (t / 2.0).ln()).exp() * jv
        }
    }
}

/// `(t/2)^alpha / Gamma(alpha + 1)`.
fn series_prefactor(alpha: f64, t: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else if alpha + 1.0 < 100.0 {
        (t / 2.0).powf(alpha) / gamma(alpha + 1.0)
    } else {
        (alpha * (t / 2.0).ln() - ln_gamma(alpha + 1.0)).exp()
    }
}

/// `sum_k (-t^2/4)^k / (k! (alpha+1)_k)` in double-double arithmetic.
fn normalized_series(alpha: f64, t: f64) -> Dd {
    let x = Dd::product_of(t, t).mul_f64(0.25);
    let neg_x = -x;
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut largest = 1.0_f64;
    let sqrt_x = x.hi.sqrt();
    let mut k = 1u32;
    loop {
        let kf = k as f64;
        let denom = Dd::sum_of(alpha, kf).mul_f64(kf);
        term = term * neg_x / denom;
        sum = sum + term;
        let mag = term.hi.abs();
        largest = largest.max(mag);
        if kf > sqrt_x && (mag <= 1e-34 * largest || mag < 1e-300) {
            break;
        }
        k += 1;
        if k > 2000 {
            break;
        }
    }
    sum
}

/// Hankel expansion of `J_nu(t)`, accurate for `|nu| <= 3/2` and `t >= 25`.
fn hankel(nu: f64, t: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * t);
        let mag = term.abs();
        if mag > prev {
            break;
        }
        // Terms a_1, a_3, ... feed Q; a_2, a_4, ... feed P, with alternating signs.
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if mag < 1e-18 {
            break;
        }
        prev = mag;
    }
    let phase = (0.5 * nu + 0.25) * PI;
    let (sin_t, cos_t) = t.sin_cos();
    let (sin_p, cos_p) = phase.sin_cos();
    let cos_chi = cos_t * cos_p + sin_t * sin_p;
    let sin_chi = sin_t * cos_p - cos_t * sin_p;
    (2.0 / (PI * t)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// `J_alpha(t)` for `t > 25` and `alpha < t`.
fn large_argument(alpha: f64, t: f64) -> f64 {
    let steps = (alpha + 0.5).floor();
    if steps <= 0.0 {
        return hankel(alpha, t);
    }
    let base = alpha - steps;
    let mut lower = hankel(base, t);
    let mut upper = hankel(base + 1.0, t);
    let mut nu = base + 1.0;
    for _ in 1..(steps as usize) {
        let next = 2.0 * nu / t * upper - lower;
        lower = upper;
        upper = next;
        nu += 1.0;
    }
    upper
}

fn check_argument(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!(
            "Bessel argument must be finite and non-negative, got {t}"
        )));
    }
    Ok(())
}

/// `J_alpha(t)`.
pub fn bessel_j(order: BesselOrder, t: f64) -> Result<f64> {
    check_argument(t)?;
    Ok(order.j(t))
}

/// The normalized Bessel function `j_alpha(t)`; `j_alpha(0) = 1`.
pub fn normalized_j(order: BesselOrder, t: f64) -> Result<f64> {
    check_argument(t)?;
    Ok(order.normalized(t))
}

/// Bisect a sign change of `j_alpha` on `[lo, hi]` down to adjacent floats.
fn bisect_zero(order: BesselOrder, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = order.normalized(lo);
    let mut fhi = order.normalized(hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = order.normalized(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    if flo.abs() <= fhi.abs() {
        lo
    } else {
        hi
    }
}

/// The first `count` positive zeros of `J_alpha`, increasing.
///
/// Zeros are bracketed by scanning forward from the previous zero and then
/// bisected to full double precision.
pub fn zeros(order: BesselOrder, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidInput("zero count must be positive".into()));
    }
    let mut out = Vec::with_capacity(count);
    // j_alpha is positive on [0, alpha] since the first zero exceeds the order.
    let mut a = order.alpha().max(0.0);
    let mut fa = order.normalized(a);
    while out.len() < count {
        let b = a + ZERO_SCAN_STEP;
        let fb = order.normalized(b);
        if fb == 0.0 {
            out.push(b);
            a = b + 1e-9;
            fa = order.normalized(a);
            continue;
        }
        if (fa > 0.0) != (fb > 0.0) {
            let root = bisect_zero(order, a, b);
            out.push(root);
        }
        a = b;
        fa = fb;
    }
    Ok(out)
}

/// The first positive zero `q_alpha` of `j_alpha`.
pub fn first_positive_zero(order: BesselOrder) -> f64 {
    zeros(order, 1).expect("count is positive")[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn order(a: f64) -> BesselOrder {
        BesselOrder::new(a).unwrap()
    }

    #[test]
    fn half_order_vanishes_at_pi() {
        assert!(bessel_j(order(0.5), PI).unwrap().abs() < 1e-16);
    }

    #[test]
    fn order_zero_at_origin_is_one() {
        assert_eq!(bessel_j(order(0.0), 0.0).unwrap(), 1.0);
    }

    #[test]
    fn closed_forms_for_half_integer_orders() {
        for &t in &[1e-4, 0.3, 1.0, 7.5, 24.9, 25.1, 60.0, 333.3] {
            let jm = normalized_j(order(-0.5), t).unwrap();
            let jp = normalized_j(order(0.5), t).unwrap();
            assert!((jm - t.cos()).abs() < 1e-14, "t={t}");
            assert!((jp - t.sin() / t).abs() < 1e-14, "t={t}");
            let exact = (2.0 / (PI * t)).sqrt() * (t.sin() / t - t.cos());
            assert!((bessel_j(order(1.5), t).unwrap() - exact).abs() < 1e-14 * (1.0 + exact.abs()));
        }
    }

    #[test]
    fn normalized_is_one_at_origin() {
        for &a in &[-0.5, 0.0, 0.5, 1.0, 1.5, 2.5, 7.0] {
            assert_eq!(normalized_j(order(a), 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn regimes_agree_across_the_switch() {
        for &a in &[0.0, 1.0, 2.0, 3.7] {
            let o = order(a);
            for &t in &[25.5, 27.0, 30.0] {
                let series = series_prefactor(a, t) * normalized_series(a, t).to_f64();
                let asym = large_argument(a, t);
                assert!((series - asym).abs() < 1e-13, "a={a} t={t}: {series} vs {asym}");
                assert!((o.j(t) - asym).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(BesselOrder::new(-0.6).is_err());
        assert!(bessel_j(order(0.0), -1.0).is_err());
        assert!(normalized_j(order(0.0), f64::NAN).is_err());
        assert!(zeros(order(0.0), 0).is_err());
    }

    #[test]
    fn known_zeros() {
        assert!((first_positive_zero(order(-0.5)) - FRAC_PI_2).abs() < 1e-14);
        assert!((first_positive_zero(order(0.5)) - PI).abs() < 1e-14);
        let z = zeros(order(0.5), 3).unwrap();
        for (k, q) in z.iter().enumerate() {
            assert!((q - (k + 1) as f64 * PI).abs() < 1e-13);
        }
        let z = zeros(order(-0.5), 2).unwrap();
        assert!((z[0] - FRAC_PI_2).abs() < 1e-14 && (z[1] - 3.0 * FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn large_order_first_zero() {
        // j_{10,1} = 14.4755006865545...
        let q = first_positive_zero(order(10.0));
        assert!((q - 14.475_500_686_554_54).abs() < 1e-10, "{q}");
    }
}
