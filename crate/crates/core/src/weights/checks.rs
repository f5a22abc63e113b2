use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::catalog::power;
use super::Weight;
use crate::conditions::{ConditionReport, Tolerances, Verdict};
use crate::error::{Error, Result};
use crate::numerics::{integrate_from_zero, integrate_half_line, sphere_measure, Tail, Tolerance};

/// A radial `w` with `v(rho x) <= w(rho) v(x)` for all `rho > 0` and `x`.
pub fn homogeneity_majorant(v: &Weight) -> Result<Weight> {
    match *v {
        Weight::Power { a } => Ok(Weight::power(a)),
        Weight::Piecewise { alpha, beta } => Ok(Weight::radial_fn(
            format!("max(rho^{alpha}, rho^{beta})"),
            vec![1.0],
            move |r| power(r, alpha).max(power(r, beta)),
        )),
        _ => Err(Error::Unsupported(format!(
            "no majorant available for {}",
            v.label()
        ))),
    }
}

/// Candidate set for the Campanato–Morrey supremum: centres on
/// `lattice_step Z^n` with `|x| <= center_radius`, radii `2^(k / per_octave)`
/// for `k / per_octave` in `[min_exp, max_exp]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampanatoGrid {
    pub lattice_step: f64,
    pub center_radius: f64,
    pub min_exp: i32,
    pub max_exp: i32,
    pub per_octave: u32,
}

impl Default for CampanatoGrid {
    fn default() -> Self {
        CampanatoGrid {
            lattice_step: 1.0,
            center_radius: 10.0,
            min_exp: -8,
            max_exp: 8,
            per_octave: 1,
        }
    }
}

impl CampanatoGrid {
    /// Halve the lattice step and double the radii per octave; the candidate
    /// set only grows.
    pub fn refine(&self) -> Self {
        CampanatoGrid {
            lattice_step: self.lattice_step / 2.0,
            per_octave: self.per_octave * 2,
            ..*self
        }
    }

    fn radii(&self) -> Vec<f64> {
        let m = self.per_octave as i32;
        (self.min_exp * m..=self.max_exp * m)
            .map(|k| 2f64.powf(k as f64 / m as f64))
            .collect()
    }
}

/// Lower estimate of the Campanato–Morrey norm and where it is attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampanatoEstimate {
    pub value: f64,
    pub center: Vec<f64>,
    pub radius: f64,
}

/// `sup_{x, rho} rho^alpha (rho^(-n) int_{|y-x|<rho} |V(y)|^r dy)^(1/r)`
/// over the default candidate set.
pub fn campanato_morrey_norm(v: &Weight, alpha: f64, r: f64, n: usize) -> Result<CampanatoEstimate> {
    campanato_morrey_norm_with(v, alpha, r, n, &CampanatoGrid::default())
}

pub fn campanato_morrey_norm_with(
    v: &Weight,
    alpha: f64,
    r: f64,
    n: usize,
    grid: &CampanatoGrid,
) -> Result<CampanatoEstimate> {
    if n == 0 || !(r >= 1.0) || !(alpha >= 0.0) || alpha > n as f64 / r + 1e-12 {
        return Err(Error::InvalidInput(format!(
            "need n >= 1, r >= 1 and 0 <= alpha <= n/r, got n = {n}, r = {r}, alpha = {alpha}"
        )));
    }
    let radii = grid.radii();
    let mut best = CampanatoEstimate {
        value: 0.0,
        center: vec![0.0; n],
        radius: radii[0],
    };
    let mut consider = |value: f64, center: &[f64], rho: f64| {
        if value > best.value {
            best = CampanatoEstimate {
                value,
                center: center.to_vec(),
                radius: rho,
            };
        }
    };
    if v.is_radial() {
        for d in lattice_norms(n, grid.lattice_step, grid.center_radius) {
            let mut center = vec![0.0; n];
            center[0] = d;
            for &rho in &radii {
                let i = radial_ball_integral(v, r, n, d, rho)?;
                consider(rho.powf(alpha) * (i / rho.powi(n as i32)).powf(1.0 / r), &center, rho);
            }
        }
    } else {
        let Weight::TabulatedGrid(g) = v else { unreachable!() };
        if g.dimension() != n {
            return Err(Error::InvalidInput("grid weight has the wrong dimension".into()));
        }
        for center in lattice_points(n, grid.lattice_step, grid.center_radius) {
            for &rho in &radii {
                let i = grid_ball_lower(g, r, &center, rho);
                consider(rho.powf(alpha) * (i / rho.powi(n as i32)).powf(1.0 / r), &center, rho);
            }
        }
    }
    Ok(best)
}

fn lattice_points(n: usize, step: f64, radius: f64) -> Vec<Vec<f64>> {
    let m = (radius / step).floor() as i64;
    let mut out = Vec::new();
    let mut idx = vec![-m; n];
    loop {
        let x: Vec<f64> = idx.iter().map(|&i| i as f64 * step).collect();
        if x.iter().map(|t| t * t).sum::<f64>() <= radius * radius * (1.0 + 1e-12) {
            out.push(x);
        }
        let mut d = 0;
        while d < n {
            idx[d] += 1;
            if idx[d] <= m {
                break;
            }
            idx[d] = -m;
            d += 1;
        }
        if d == n {
            return out;
        }
    }
}

/// Distinct norms of lattice points, which is all a radial weight sees.
fn lattice_norms(n: usize, step: f64, radius: f64) -> Vec<f64> {
    let mmax = ((radius / step) * (radius / step)).floor() as u64;
    let representable = |m: u64| -> bool {
        match n {
            1 => {
                let s = (m as f64).sqrt().round() as u64;
                s * s == m
            }
            2 => (0..=((m as f64).sqrt() as u64)).any(|a| {
                let b2 = m - a * a;
                let b = (b2 as f64).sqrt().round() as u64;
                b * b == b2
            }),
            3 => {
                // Legendre: not of the form 4^a (8b + 7)
                let mut k = m;
                while k > 0 && k % 4 == 0 {
                    k /= 4;
                }
                m == 0 || k % 8 != 7
            }
            _ => true,
        }
    };
    (0..=mmax).filter(|&m| representable(m)).map(|m| step * (m as f64).sqrt()).collect()
}

/// `int_0^th sin^m`.
fn sine_power_integral(m: usize, th: f64) -> f64 {
    match m {
        0 => th,
        1 => 1.0 - th.cos(),
        _ => {
            let mf = m as f64;
            -th.sin().powi(m as i32 - 1) * th.cos() / mf + (mf - 1.0) / mf * sine_power_integral(m - 2, th)
        }
    }
}

/// Surface measure of `{|y| = s} cap B(x, rho)` with `|x| = d`.
fn sphere_in_ball(n: usize, s: f64, d: f64, rho: f64) -> f64 {
    if n == 1 {
        return [s, -s].iter().filter(|&&y| (y - d).abs() < rho).count() as f64;
    }
    if s + d <= rho {
        return sphere_measure(n) * s.powi(n as i32 - 1);
    }
    if s <= d - rho || s >= d + rho || d == 0.0 {
        return 0.0;
    }
    let c = ((s * s + d * d - rho * rho) / (2.0 * s * d)).clamp(-1.0, 1.0);
    sphere_measure(n - 1) * s.powi(n as i32 - 1) * sine_power_integral(n - 2, c.acos())
}

fn radial_ball_integral(v: &Weight, r: f64, n: usize, d: f64, rho: f64) -> Result<f64> {
    let f = |s: f64| {
        let a = sphere_in_ball(n, s, d, rho);
        if a == 0.0 {
            0.0
        } else {
            v.radial(s).abs().powf(r) * a
        }
    };
    let mut breaks = vec![(d - rho).abs(), d, d + rho];
    breaks.extend(v.breakpoints(d + rho));
    // the cap area has square-root behaviour at |d - rho| and d + rho
    let tol = Tolerance::new(1e-300, 1e-9);
    match integrate_half_line(f, &breaks, Tail::None, &tol) {
        Ok(e) => Ok(e.value),
        Err(Error::NotIntegrable(_)) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Cells fully inside the ball, or the exact value when the ball sits in a
/// single cell.
fn grid_ball_lower(g: &super::GridWeight, r: f64, x: &[f64], rho: f64) -> f64 {
    let n = x.len();
    let h = g.spacing();
    let vol = crate::numerics::ball_volume(n) * rho.powi(n as i32);
    let lo: Vec<f64> = x.iter().map(|c| c - rho).collect();
    let hi: Vec<f64> = x.iter().map(|c| c + rho).collect();
    let corner_lo: Vec<f64> = lo.iter().map(|t| (t / h).floor() * h).collect();
    if (0..n).all(|d| hi[d] <= corner_lo[d] + h) {
        return g.eval(x).abs().powf(r) * vol;
    }
    let mut total = 0.0;
    for (i, val) in g.values().iter().enumerate() {
        if *val == 0.0 {
            continue;
        }
        let c = g.cell_corner(i);
        let inside = (0..1usize << n).all(|mask| {
            let d2: f64 = (0..n)
                .map(|k| {
                    let y = c[k] + if mask >> k & 1 == 1 { h } else { 0.0 };
                    (y - x[k]) * (y - x[k])
                })
                .sum();
            d2 <= rho * rho
        });
        if inside {
            total += val.abs().powf(r) * g.cell_measure();
        }
    }
    total
}

/// Which translation or doubling comparison to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalMode {
    /// `int_A g(t - |A|) <= C int_A g(t)`.
    Vs1,
    /// `int_A g(t + |A|) <= C int_A g(t)`.
    Vs2,
    /// `int_{2A} g <= C int_A g`, `2A` concentric with twice the length.
    Doubling,
}

impl fmt::Display for IntervalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalMode::Vs1 => "vs1",
            IntervalMode::Vs2 => "vs2",
            IntervalMode::Doubling => "doubling",
        })
    }
}

impl FromStr for IntervalMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vs1" => Ok(IntervalMode::Vs1),
            "vs2" => Ok(IntervalMode::Vs2),
            "doubling" => Ok(IntervalMode::Doubling),
            other => Err(Error::InvalidInput(format!("unknown interval mode '{other}'"))),
        }
    }
}

/// Intervals `[k, k+1]`, `k = 0..=20`, and dyadic `[2^j, 2^(j+1)]`, `j = -6..=6`.
pub fn standard_intervals() -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = (0..=20).map(|k| (k as f64, k as f64 + 1.0)).collect();
    v.extend((-6..=6).map(|j| (2f64.powi(j), 2f64.powi(j + 1))));
    v
}

/// Ratio cap used when none is given.
pub const DEFAULT_INTERVAL_CAP: f64 = 1e3;

/// `int_a^b v0(|t|)^(1-p')`, splitting at zero.
fn dual_integral(v0: &Weight, pprime: f64, a: f64, b: f64) -> Result<f64> {
    let g = |t: f64| power(v0.radial(t.abs()), 1.0 - pprime);
    let tol = Tolerance::new(0.0, 1e-10);
    let piece = |lo: f64, hi: f64| -> Result<f64> {
        // both ends have the same sign here
        let (lo, hi) = if hi <= 0.0 { (-hi, -lo) } else { (lo, hi) };
        if hi <= lo {
            return Ok(0.0);
        }
        let e = if lo == 0.0 && !g(0.0).is_finite() {
            integrate_from_zero(g, hi, &tol)
        } else {
            let mut pts = vec![lo, hi];
            pts.extend(v0.breakpoints(hi).into_iter().filter(|x| *x > lo));
            pts.sort_by(f64::total_cmp);
            crate::numerics::integrate_breaks(g, &pts, &tol)
        };
        match e {
            Ok(e) => Ok(e.value),
            Err(Error::NotIntegrable(_)) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };
    if a < 0.0 && b > 0.0 {
        Ok(piece(a, 0.0)? + piece(0.0, b)?)
    } else {
        piece(a, b)
    }
}

/// Checks one of the interval conditions for `g = v0^(1-p')` over the given
/// intervals and compares the largest ratio with `cap`.
pub fn interval_translation_check(
    v0: &Weight,
    p: f64,
    mode: IntervalMode,
    intervals: &[(f64, f64)],
    cap: f64,
) -> Result<ConditionReport> {
    if !v0.is_radial() {
        return Err(Error::InvalidInput("interval conditions need a radial weight".into()));
    }
    if !(p > 1.0) || p.is_infinite() {
        return Err(Error::InvalidInput(format!("need 1 < p < inf, got {p}")));
    }
    if intervals.is_empty() || intervals.iter().any(|(a, b)| !(b > a)) {
        return Err(Error::InvalidInput("need a nonempty list of intervals a < b".into()));
    }
    let pprime = p / (p - 1.0);
    let mut worst = (0.0f64, intervals[0]);
    let mut ratios = Vec::with_capacity(intervals.len());
    for &(a, b) in intervals {
        let len = b - a;
        let base = dual_integral(v0, pprime, a, b)?;
        let moved = match mode {
            IntervalMode::Vs1 => dual_integral(v0, pprime, a - len, b - len)?,
            IntervalMode::Vs2 => dual_integral(v0, pprime, a + len, b + len)?,
            IntervalMode::Doubling => dual_integral(v0, pprime, a - len / 2.0, b + len / 2.0)?,
        };
        let ratio = if base > 0.0 && base.is_finite() {
            moved / base
        } else if moved == 0.0 {
            1.0
        } else {
            f64::INFINITY
        };
        ratios.push(ratio);
        if !(ratio <= worst.0) {
            worst = (ratio, (a, b));
        }
    }
    let verdict = if worst.0 <= cap { Verdict::Holds } else { Verdict::Fails };
    let tag = match mode {
        IntervalMode::Vs1 => "left-translation",
        IntervalMode::Vs2 => "right-translation",
        IntervalMode::Doubling => "doubling",
    };
    let mut report = ConditionReport::new(format!("interval-{mode}"), tag, verdict, worst.0)
        .with_witness("interval-left-end", worst.1 .0)
        .with_tolerances(Tolerances {
            relative: 1e-10,
            absolute: 0.0,
            cap,
        })
        .note(format!("worst interval [{}, {}]", worst.1 .0, worst.1 .1));
    let tail = &ratios[ratios.len().saturating_sub(3)..];
    if tail.windows(2).all(|w| w[1] > w[0] * 1.5) && tail.len() > 1 {
        report = report.note("ratios still growing at the end of the family");
    }
    Ok(report)
}
