//! Radial integrals with explicit divergence detection.

use crate::error::{Error, Result};
use crate::numerics::{
    integrate_breaks, integrate_from_zero, integrate_half_line, power_exponent, sphere_measure, Tail, Tolerance,
};
use crate::weights::{shell_width, Weight};

const OVERFLOW: f64 = 1e150;

/// Exponents within this margin of `-1` count as divergent.
const EXPONENT_MARGIN: f64 = 1e-9;

pub(crate) fn tolerance() -> Tolerance {
    Tolerance::new(1e-300, 1e-10)
}

pub(crate) fn to_infinity(r: Result<f64>) -> Result<f64> {
    match r {
        Ok(v) if v > OVERFLOW => Ok(f64::INFINITY),
        Err(Error::NotIntegrable(_)) => Ok(f64::INFINITY),
        Err(Error::NonConvergence { value, .. }) if value.abs() > OVERFLOW => Ok(f64::INFINITY),
        other => other,
    }
}

/// Power-law behaviour `r^k` of a radial integrand at one end, either known
/// exactly or fitted from samples.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Ends {
    Known { head: f64, tail: f64 },
    Fitted,
}

/// `int_0^inf f(r) dr` for `f >= 0`. A tail behaving like `r^k` with
/// `k >= -1`, or a head with `k <= -1`, is reported as `+inf` without
/// quadrature to infinity.
pub(crate) fn half_line<F: Fn(f64) -> f64>(f: F, breaks: &[f64], ends: Ends) -> Result<f64> {
    let (head, tail) = match ends {
        Ends::Known { head, tail } => (head, tail),
        Ends::Fitted => {
            let fit = |r: f64| {
                let k = power_exponent(&f, r);
                if k.is_finite() {
                    k
                } else {
                    f64::NAN
                }
            };
            (fit(1e-12), fit(1e12))
        }
    };
    if head <= -1.0 + EXPONENT_MARGIN || tail >= -1.0 - EXPONENT_MARGIN {
        return Ok(f64::INFINITY);
    }
    let mut b: Vec<f64> = breaks.to_vec();
    b.push(1.0);
    to_infinity(integrate_half_line(&f, &b, Tail::Algebraic, &tolerance()).map(|e| e.value))
}

/// `omega_{n-1} int_0^R w0(r) r^(n-1) dr = int_{|x| < R} w`.
pub fn radial_mass(w: &Weight, radius: f64, n: usize) -> Result<f64> {
    if !w.is_radial() {
        return Err(Error::InvalidInput("radial mass needs a radial weight".into()));
    }
    if !(radius >= 0.0) {
        return Err(Error::Domain(format!("radius must be >= 0, got {radius}")));
    }
    if radius == 0.0 {
        return Ok(0.0);
    }
    let omega = sphere_measure(n);
    let nf = n as f64;
    let power_mass = |a: f64, lo: f64, hi: f64| -> f64 {
        let e = nf + a;
        if e <= 0.0 {
            if lo == 0.0 {
                f64::INFINITY
            } else if e == 0.0 {
                (hi / lo).ln()
            } else {
                (hi.powf(e) - lo.powf(e)) / e
            }
        } else {
            (hi.powf(e) - lo.powf(e)) / e
        }
    };
    match *w {
        Weight::Power { a } => Ok(omega * power_mass(a, 0.0, radius)),
        Weight::Piecewise { alpha, beta } => {
            let head = power_mass(alpha, 0.0, radius.min(1.0));
            let tail = if radius > 1.0 { power_mass(beta, 1.0, radius) } else { 0.0 };
            Ok(omega * (head + tail))
        }
        Weight::Counterexample { n: wn } if wn == n => Ok(omega * counterexample_mass(n, radius)),
        _ => {
            let nm1 = n as i32 - 1;
            let f = |r: f64| {
                let v = w.radial(r);
                if v == 0.0 {
                    0.0
                } else {
                    v * r.powi(nm1)
                }
            };
            let mut pts = vec![0.0, radius];
            pts.extend(w.breakpoints(radius));
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let tol = tolerance();
            let value = if f(0.0).is_finite() {
                integrate_breaks(f, &pts, &tol).map(|e| e.value)
            } else {
                integrate_from_zero(f, pts[1], &tol).and_then(|h| {
                    Ok(h.value + if pts.len() > 2 { integrate_breaks(f, &pts[1..], &tol)?.value } else { 0.0 })
                })
            };
            Ok(omega * to_infinity(value)?)
        }
    }
}

/// `int_0^R u0 r^(n-1) dr` for the shell weight, where the integrand is
/// `k^n` on each shell.
fn counterexample_mass(n: usize, radius: f64) -> f64 {
    let kmax = radius.floor();
    let shell = |kf: f64| kf.powi(n as i32) * shell_width(n, kf).min(radius - kf).max(0.0);
    if kmax < 1e4 {
        return (1..=kmax as u64).map(|k| shell(k as f64)).sum();
    }
    // every shell below kmax is complete and contributes 1/k
    let m = kmax - 1.0;
    let harmonic = m.ln() + EULER_GAMMA + 0.5 / m - 1.0 / (12.0 * m * m) + 1.0 / (120.0 * m.powi(4));
    harmonic + shell(kmax)
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ball_volume;

    #[test]
    fn masses() {
        let v = radial_mass(&Weight::constant(), 2.0, 3).unwrap();
        assert!((v - ball_volume(3) * 8.0).abs() < 1e-12);
        assert_eq!(radial_mass(&Weight::power(-3.0), 1.0, 3).unwrap(), f64::INFINITY);
        let g = Weight::shifted_power(1.0);
        let v = radial_mass(&g, 1.0, 1).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
        let inv = Weight::radial_fn("r^-1/2", vec![], |r: f64| r.powf(-0.5));
        let v = radial_mass(&inv, 4.0, 1).unwrap();
        assert!((v - 8.0).abs() < 1e-9);
    }

    #[test]
    fn counterexample_mass_is_harmonic() {
        // int_0^(N+1) u0 r^(n-1) dr = sum_{k <= N} 1/k
        let got = counterexample_mass(2, 101.0);
        let h: f64 = (1..=100).map(|k| 1.0 / k as f64).sum();
        assert!((got - h).abs() < 1e-12);
        let big = 50_000.5;
        let h: f64 = (1..50_000).map(|k| 1.0 / k as f64).sum::<f64>() + 1.0 / 50_000.0;
        assert!((counterexample_mass(3, big) - h).abs() < 1e-12);
    }

    #[test]
    fn divergence_by_exponent() {
        let v = half_line(|r: f64| (1.0 + r).powi(-2), &[], Ends::Fitted).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        let v = half_line(|r: f64| 1.0 / (1.0 + r), &[], Ends::Fitted).unwrap();
        assert_eq!(v, f64::INFINITY);
    }
}
