use super::counterexample::counterexample_level_measure;
use super::{GridWeight, Weight};
use crate::error::{Error, Result};
use crate::numerics::{
    ball_volume, integrate, integrate_from_zero, integrate_half_line, integrate_to_infinity, sphere_measure,
    Tail, Tolerance,
};

/// A radial interval on which `v0` is monotone.
#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    increasing: bool,
}

#[derive(Debug, Clone)]
enum Source {
    Radial { w: Weight, n: usize, pieces: Vec<Piece> },
    Counterexample { n: usize },
    Cells { sorted: Vec<f64>, cell: f64 },
}

/// The non-increasing rearrangement `u*` of a weight on `R^n`, sampled on a
/// log grid of `t`. Exact values at other `t` come from [`Self::value`].
#[derive(Debug, Clone)]
pub struct RearrangementTable {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    /// `u*` is unbounded as `t -> 0` (the weight is not essentially bounded).
    pub unbounded_head: bool,
    /// `|{u > 0}|`, possibly infinite.
    pub support_measure: f64,
    source: Source,
}

/// `u*(t) = inf { s >= 0 : |{u > s}| <= t }` for a radial or grid weight.
pub fn rearrangement(w: &Weight, n: usize) -> Result<RearrangementTable> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let source = match w {
        Weight::Counterexample { n: wn } => {
            if *wn != n {
                return Err(Error::InvalidInput(format!(
                    "counterexample weight built for n = {wn}, used with n = {n}"
                )));
            }
            Source::Counterexample { n }
        }
        Weight::TabulatedGrid(g) => grid_source(g, n)?,
        _ => Source::Radial {
            w: w.clone(),
            n,
            pieces: pieces(w),
        },
    };
    let mut table = RearrangementTable {
        t: Vec::new(),
        values: Vec::new(),
        unbounded_head: false,
        support_measure: 0.0,
        source,
    };
    table.support_measure = table.level_measure(0.0);
    table.unbounded_head = match &table.source {
        Source::Counterexample { .. } => true,
        Source::Cells { .. } => false,
        Source::Radial { .. } => !table.superlevel(f64::MAX).is_empty(),
    };
    table.t = (-96..=96).map(|k| 10f64.powf(k as f64 / 8.0)).collect();
    table.values = table.t.iter().map(|&t| table.value(t)).collect();
    Ok(table)
}

fn grid_source(g: &GridWeight, n: usize) -> Result<Source> {
    if g.dimension() != n {
        return Err(Error::InvalidInput(format!(
            "grid weight has dimension {}, used with n = {n}",
            g.dimension()
        )));
    }
    let mut sorted: Vec<f64> = g.values().iter().copied().filter(|v| *v > 0.0).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(Source::Cells {
        sorted,
        cell: g.cell_measure(),
    })
}

fn pieces(w: &Weight) -> Vec<Piece> {
    let mut cuts = vec![0.0];
    cuts.extend(w.breakpoints(f64::INFINITY));
    cuts.push(f64::INFINITY);
    cuts.dedup();
    cuts.windows(2)
        .map(|c| {
            let (lo, hi) = (c[0], c[1]);
            let a = if lo == 0.0 { 1e-300 } else { lo + (hi.min(lo * 4.0 + 1.0) - lo) * 1e-9 };
            let b = if hi.is_infinite() { 1e300 } else { hi - (hi - lo) * 1e-9 };
            Piece {
                lo,
                hi,
                increasing: w.radial(b) > w.radial(a),
            }
        })
        .collect()
}

/// First `r` in `[lo, hi]` with `pred(r)` true, for a predicate that flips
/// once from false to true; bisects on the bit patterns of nonnegative reals.
fn first_true(lo: f64, hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    let (mut a, mut b) = (lo.to_bits(), hi.min(f64::MAX).to_bits());
    if pred(f64::from_bits(a)) {
        return lo;
    }
    if !pred(f64::from_bits(b)) {
        return hi;
    }
    while b - a > 1 {
        let m = a + (b - a) / 2;
        if pred(f64::from_bits(m)) {
            b = m;
        } else {
            a = m;
        }
    }
    f64::from_bits(b)
}

impl RearrangementTable {
    /// Radial intervals `(a, b)` forming `{u > s}` (radial sources only).
    fn superlevel(&self, s: f64) -> Vec<(f64, f64)> {
        let Source::Radial { w, pieces, .. } = &self.source else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for p in pieces {
            let above = |r: f64| w.radial(r) > s;
            let (lo, hi) = (p.lo, p.hi);
            let probe_hi = if hi.is_infinite() { f64::MAX } else { hi };
            let interval = if p.increasing {
                let c = first_true(lo, probe_hi, above);
                (c, hi)
            } else {
                let c = first_true(lo, probe_hi, |r| !above(r));
                (lo, if c >= probe_hi { hi } else { c })
            };
            if interval.1 > interval.0 {
                let mid = if interval.1.is_infinite() {
                    interval.0 * 2.0 + 1.0
                } else {
                    0.5 * (interval.0 + interval.1)
                };
                if above(mid) {
                    out.push(interval);
                }
            }
        }
        out
    }

    /// `lambda(s) = |{u > s}|`.
    pub fn level_measure(&self, s: f64) -> f64 {
        match &self.source {
            Source::Counterexample { n } => counterexample_level_measure(*n, s.max(0.0)),
            Source::Cells { sorted, cell } => cell * sorted.partition_point(|v| *v > s) as f64,
            Source::Radial { n, .. } => {
                let bv = ball_volume(*n);
                self.superlevel(s)
                    .iter()
                    .map(|&(a, b)| bv * (b.powi(*n as i32) - a.powi(*n as i32)))
                    .sum()
            }
        }
    }

    /// `u*(t)`; `+inf` when `|{u > s}| > t` for every finite `s`.
    pub fn value(&self, t: f64) -> f64 {
        if let Source::Cells { sorted, cell } = &self.source {
            let i = (t / cell).floor();
            return if i < sorted.len() as f64 { sorted[i as usize] } else { 0.0 };
        }
        if self.level_measure(0.0) <= t {
            return 0.0;
        }
        if self.level_measure(f64::MAX) > t {
            return f64::INFINITY;
        }
        first_true(0.0, f64::MAX, |s| self.level_measure(s) <= t)
    }

    /// `int_0^T u*(t) dt`, possibly `+inf`.
    pub fn head_integral(&self, big_t: f64) -> Result<f64> {
        if !(big_t >= 0.0) {
            return Err(Error::Domain(format!("need T >= 0, got {big_t}")));
        }
        if big_t == 0.0 {
            return Ok(0.0);
        }
        match &self.source {
            Source::Cells { sorted, cell } => {
                let m = (big_t / cell).floor() as usize;
                let full: f64 = sorted.iter().take(m).sum::<f64>() * cell;
                let rest = sorted.get(m).map_or(0.0, |v| v * (big_t - m as f64 * cell));
                Ok(full + rest)
            }
            // every nonempty level set carries sum_{k > s} omega / k = inf
            Source::Counterexample { .. } => Ok(f64::INFINITY),
            Source::Radial { w, n, .. } => {
                let s = self.value(big_t);
                if s.is_infinite() {
                    return Ok(f64::INFINITY);
                }
                let nm1 = *n as i32 - 1;
                let f = |r: f64| w.radial(r) * r.powi(nm1);
                let tol = Tolerance::new(1e-15, 1e-12);
                let mut total = 0.0;
                for (a, b) in self.superlevel(s) {
                    let part = match (a == 0.0, b.is_infinite()) {
                        (false, false) => integrate(f, a, b, &tol),
                        (true, false) => integrate_from_zero(f, b, &tol),
                        (false, true) => integrate_to_infinity(f, a, &tol),
                        (true, true) => integrate_from_zero(f, 1.0, &tol)
                            .and_then(|h| Ok(h + integrate_to_infinity(f, 1.0, &tol)?)),
                    };
                    match part {
                        Ok(e) if e.value.is_finite() && e.value < 1e150 => total += e.value,
                        Ok(_) | Err(Error::NotIntegrable(_)) => return Ok(f64::INFINITY),
                        Err(Error::NonConvergence { value, .. }) if value > 1e150 => return Ok(f64::INFINITY),
                        Err(e) => return Err(e),
                    }
                }
                let level = self.level_measure(s);
                Ok(sphere_measure(*n) * total + s * (big_t - level).max(0.0))
            }
        }
    }

    /// `int_0^inf u*(t)^p dt`, which equals `int |u|^p dx`.
    pub fn lp_norm_pow(&self, p: f64) -> Result<f64> {
        let f = |t: f64| self.value(t).powf(p);
        let tol = Tolerance::new(1e-14, 1e-9);
        // log-spaced panels, since underflow can leave a huge but finite support
        let mut breaks: Vec<f64> = self.t.iter().copied().filter(|&t| t < self.support_measure).collect();
        let tail = if self.support_measure.is_finite() {
            breaks.push(self.support_measure);
            Tail::None
        } else {
            Tail::Algebraic
        };
        match integrate_half_line(f, &breaks, tail, &tol) {
            Ok(e) => Ok(e.value),
            Err(Error::NotIntegrable(_)) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disc_indicator() {
        let w = Weight::radial_fn("disc", vec![1.0], |r| if r < 1.0 { 1.0 } else { 0.0 });
        let r = rearrangement(&w, 2).unwrap();
        assert_eq!(r.value(3.0), 1.0);
        assert_eq!(r.value(PI - 1e-9), 1.0);
        assert_eq!(r.value(PI + 1e-9), 0.0);
        assert!(!r.unbounded_head);
        assert!((r.support_measure - PI).abs() < 1e-15);
    }

    #[test]
    fn decaying_exponential_on_the_line() {
        let w = Weight::radial_fn("exp", vec![], |r| (-r).exp());
        let r = rearrangement(&w, 1).unwrap();
        for t in [0.01, 0.5, 3.0, 40.0] {
            assert!((r.value(t) - (-t / 2.0).exp()).abs() < 1e-14 * (-t / 2.0f64).exp().max(1e-300));
        }
        // int_0^T e^(-t/2) dt
        let h = r.head_integral(3.0).unwrap();
        assert!((h - 2.0 * (1.0 - (-1.5f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn power_weight_closed_form() {
        // |x|^b, b < 0: u*(t) = (t / |B_1|)^(b/n)
        let (b, n) = (-1.2, 3);
        let r = rearrangement(&Weight::power(b), n).unwrap();
        assert!(r.unbounded_head);
        let bv = ball_volume(n);
        for t in [1e-3, 1.0, 50.0] {
            let want = (t / bv).powf(b / n as f64);
            assert!((r.value(t) - want).abs() < 1e-13 * want);
            let e = 1.0 + b / n as f64;
            let hw = bv.powf(-b / n as f64) * t.powf(e) / e;
            assert!((r.head_integral(t).unwrap() - hw).abs() < 1e-9 * hw);
        }
        assert_eq!(rearrangement(&Weight::power(0.5), 1).unwrap().value(1.0), f64::INFINITY);
    }

    #[test]
    fn counterexample_head_is_not_integrable() {
        let r = rearrangement(&Weight::counterexample(2), 2).unwrap();
        assert!(r.unbounded_head);
        assert!(r.support_measure.is_finite());
        assert_eq!(r.head_integral(1e-3).unwrap(), f64::INFINITY);
        // u*(t) ~ omega_{n-1} / t near zero
        let t = 1e-6;
        assert!((r.value(t) * t / (2.0 * PI) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn grid_cells_sorted() {
        let g = GridWeight::new(vec![0.0], 0.5, vec![4], vec![1.0, 3.0, 0.0, 2.0]).unwrap();
        let r = rearrangement(&Weight::TabulatedGrid(g), 1).unwrap();
        assert_eq!(r.value(0.2), 3.0);
        assert_eq!(r.value(0.7), 2.0);
        assert_eq!(r.value(1.2), 1.0);
        assert_eq!(r.value(1.6), 0.0);
        assert!((r.head_integral(0.75).unwrap() - (1.5 + 0.5)).abs() < 1e-15);
    }
}
