//! Quadrature: adaptive Gauss–Kronrod on panels, semi-infinite integrals,
//! fixed radial grids, sphere rules for `n = 2, 3` and weighted norms.

mod gauss;
mod grid;
mod norms;
mod quadrature;
mod sphere;
mod zeta;

use std::f64::consts::PI;

pub use gauss::{clenshaw_curtis, gauss_legendre};
pub use grid::{GridScheme, RadialGrid};
pub use norms::{lp_norm_profile, weighted_lp_norm};
pub use quadrature::{
    integrate, integrate_breaks, integrate_from_zero, integrate_oscillatory_tail,
    integrate_to_infinity, power_exponent, CompensatedSum, Estimate, Tolerance,
};
pub use sphere::{
    ball_volume, sphere_integrate, sphere_integrate_complex, sphere_measure, SphereQuadrature,
};

pub use zeta::hurwitz_zeta;

use crate::error::Result;

/// Limit on the number of oscillation-aligned breakpoints inserted.
const MAX_OSCILLATION_BREAKS: usize = 200_000;

/// How to treat `[last break, inf)` in [`integrate_half_line`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// The integrand vanishes (or is negligible) beyond the last break.
    None,
    /// Non-oscillatory algebraic or faster decay.
    Algebraic,
    /// Oscillation with the given period and algebraic decay.
    Oscillatory { period: f64 },
}

/// `int_0^R f` adaptively, starting from the grid's panels. With an
/// oscillation scale `s`, every multiple of `pi / s` becomes a panel boundary.
/// An integrand that is infinite at the origin gets a logarithmic head.
pub fn integrate_radial<F: Fn(f64) -> f64>(
    f: F,
    grid: &RadialGrid,
    oscillation_scale: Option<f64>,
    tol: &Tolerance,
) -> Result<Estimate> {
    let mut breaks = grid.breaks.clone();
    if let Some(s) = oscillation_scale.filter(|s| *s > 0.0) {
        breaks.extend(oscillation_breaks(PI / s, 0.0, grid.r_max));
    }
    integrate_half_line(f, &breaks, Tail::None, tol)
}

/// Multiples of `step` in `(lo, hi)`.
pub fn oscillation_breaks(step: f64, lo: f64, hi: f64) -> Vec<f64> {
    if !(step > 0.0) || !(hi > lo) {
        return Vec::new();
    }
    let first = (lo / step).floor() as i64 + 1;
    let last = ((hi / step).ceil() as i64 - 1).min(first + MAX_OSCILLATION_BREAKS as i64);
    (first..=last).map(|k| k as f64 * step).filter(|&x| x > lo && x < hi).collect()
}

/// `int_0^inf f` with the given breakpoints (0 is added) and tail treatment.
pub fn integrate_half_line<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    tail: Tail,
    tol: &Tolerance,
) -> Result<Estimate> {
    let mut pts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x >= 0.0)
        .collect();
    pts.push(0.0);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut total = Estimate::ZERO;
    if pts.len() >= 2 {
        if f(0.0).is_finite() {
            total = integrate_breaks(&f, &pts, tol)?;
        } else {
            total = integrate_from_zero(&f, pts[1], tol)?;
            if pts.len() > 2 {
                total = total + integrate_breaks(&f, &pts[1..], tol)?;
            }
        }
    }
    let last = *pts.last().unwrap();
    let tail_value = match tail {
        Tail::None => Estimate::ZERO,
        Tail::Algebraic => {
            if last > 0.0 {
                integrate_to_infinity(&f, last, tol)?
            } else {
                integrate_from_zero(&f, 1.0, tol)? + integrate_to_infinity(&f, 1.0, tol)?
            }
        }
        Tail::Oscillatory { period } => integrate_oscillatory_tail(&f, last, period, tol)?,
    };
    Ok(total + tail_value)
}
