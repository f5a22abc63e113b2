//! Globally adaptive Gauss–Kronrod quadrature on finite intervals, plus
//! semi-infinite integrators built on a logarithmic change of variables.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Requested accuracy for an integral: the run stops once the summed error
/// estimate is below `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Budget of subintervals before giving up.
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-13,
            rel: 1e-11,
            max_intervals: 4000,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            ..Default::default()
        }
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

/// An integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate {
        value: 0.0,
        error: 0.0,
    };

    pub fn scale(self, c: f64) -> Estimate {
        Estimate {
            value: self.value * c,
            error: self.error * c.abs(),
        }
    }
}

impl Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate {
            value: self.value + o.value,
            error: self.error + o.error,
        }
    }
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Rounding floor `50 eps int |f|`; bisection cannot go below it.
    floor: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// 21-point Kronrod rule with the embedded 10-point Gauss rule.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut resabs = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    if !kronrod.is_finite() {
        return Err(Error::NotIntegrable(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    let mean = 0.5 * kronrod;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    Ok(Panel { a, b, value, error, floor })
}

/// `int_a^b f` by global adaptive bisection.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<Estimate> {
    integrate_breaks(f, &[a, b], tol)
}

/// Adaptive integration over `[breaks[0], breaks.last()]`, starting from the
/// panels delimited by `breaks` (which need not be sorted or distinct).
pub fn integrate_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    tol: &Tolerance,
) -> Result<Estimate> {
    let mut pts: Vec<f64> = breaks.to_vec();
    if pts.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("integration limits must be finite".into()));
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        return Ok(Estimate::ZERO);
    }

    let mut heap = BinaryHeap::new();
    let mut settled: Vec<Panel> = Vec::new();
    let mut total = CompensatedSum::default();
    let mut error = 0.0;
    for w in pts.windows(2) {
        let p = gk21(&f, w[0], w[1])?;
        total.add(p.value);
        error += p.error;
        heap.push(p);
    }

    let mut steps = 0usize;
    while error > tol.target(total.value()) {
        if heap.len() + settled.len() >= tol.max_intervals {
            let (value, err) = resum(&heap, &settled);
            return Err(Error::NonConvergence { value, error: err });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        let scale = worst.a.abs().max(worst.b.abs());
        if !(mid > worst.a && mid < worst.b)
            || worst.b - worst.a <= 64.0 * f64::EPSILON * scale
            || worst.error <= worst.floor
        {
            // Cannot be refined further in double precision.
            settled.push(worst);
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let left = gk21(&f, worst.a, mid)?;
        let right = gk21(&f, mid, worst.b)?;
        total.add(left.value);
        total.add(right.value);
        total.add(-worst.value);
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        steps += 1;
        if steps % 128 == 0 {
            let (v, e) = resum(&heap, &settled);
            total = CompensatedSum::default();
            total.add(v);
            error = e;
        }
    }
    let (value, error) = resum(&heap, &settled);
    Ok(Estimate { value, error })
}

/// Sum panels in order of their left endpoint, so the result does not depend
/// on the refinement history.
fn resum(heap: &BinaryHeap<Panel>, settled: &[Panel]) -> (f64, f64) {
    let mut all: Vec<&Panel> = heap.iter().chain(settled.iter()).collect();
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = all.iter().map(|p| p.value).collect::<CompensatedSum>().value();
    let error = all.iter().map(|p| p.error).sum();
    (value, error)
}

/// Width of one panel in the logarithmic variable.
const LOG_PANEL: f64 = 1.0;
const MAX_LOG_PANELS: usize = 600;

/// `int_0^inf g(s) ds` for `g` that decays at least geometrically in `s`,
/// summed panel by panel. A stable panel ratio is extrapolated as a
/// geometric series; a ratio that stays near one signals divergence.
fn integrate_log_panels<G: Fn(f64) -> f64>(g: G, tol: &Tolerance) -> Result<Estimate> {
    let panel_tol = Tolerance {
        abs: tol.abs * 0.01,
        ..*tol
    };
    let mut sum = CompensatedSum::default();
    let mut error = 0.0;
    let mut panels: Vec<f64> = Vec::new();
    let mut quiet = 0;
    for k in 0..MAX_LOG_PANELS {
        let s0 = k as f64 * LOG_PANEL;
        let p = integrate(&g, s0, s0 + LOG_PANEL, &panel_tol)?;
        sum.add(p.value);
        error += p.error;
        panels.push(p.value);
        let total = sum.value();

        if p.value.abs() <= 0.01 * tol.target(total) {
            quiet += 1;
            if quiet >= 3 && k >= 3 {
                return Ok(Estimate { value: total, error });
            }
            continue;
        }
        quiet = 0;

        let m = panels.len();
        if m >= 5 {
            let r: Vec<f64> = (m - 4..m).map(|i| panels[i] / panels[i - 1]).collect();
            let same_sign = r.iter().all(|&x| x > 0.0);
            let drift = (r[3] - r[2]).abs().max((r[2] - r[1]).abs());
            if same_sign && r[3] < 1.0 && drift <= 1e-9 * r[3] {
                let tail = p.value * r[3] / (1.0 - r[3]);
                let tail_err = tail.abs() * (drift / (1.0 - r[3]) + 1e-12);
                return Ok(Estimate {
                    value: total + tail,
                    error: error + tail_err,
                });
            }
            if same_sign && r[3] >= 1.0 - 1e-12 && drift <= 1e-6 {
                return Err(Error::NotIntegrable(format!(
                    "integrand decays no faster than 1/r (panel ratio {:.6})",
                    r[3]
                )));
            }
        }
        if m >= 40 {
            let old = panels[m - 11];
            if old != 0.0 && p.value / old >= 0.99 {
                return Err(Error::NotIntegrable(format!(
                    "integrand decays no faster than 1/r (ratio {:.6} over ten panels)",
                    p.value / old
                )));
            }
        }
    }
    Err(Error::NonConvergence {
        value: sum.value(),
        error: error + panels.last().copied().unwrap_or(0.0).abs(),
    })
}

/// `int_a^inf f(r) dr` for `a > 0` and a non-oscillatory `f` with at least
/// algebraic decay. Integrands decaying like `r^k` with `k >= -1` are reported
/// as [`Error::NotIntegrable`].
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: &Tolerance) -> Result<Estimate> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidInput(format!("lower limit must be positive, got {a}")));
    }
    integrate_log_panels(
        |s| {
            let r = a * s.exp();
            if r.is_finite() {
                f(r) * r
            } else {
                0.0
            }
        },
        tol,
    )
}

/// `int_0^b f(r) dr` where `f` may blow up like `r^k`, `k > -1`, at the
/// origin. Heads with `k <= -1` are reported as [`Error::NotIntegrable`].
pub fn integrate_from_zero<F: Fn(f64) -> f64>(f: F, b: f64, tol: &Tolerance) -> Result<Estimate> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::InvalidInput(format!("upper limit must be positive, got {b}")));
    }
    integrate_log_panels(
        |s| {
            let r = b * (-s).exp();
            if r > 0.0 {
                f(r) * r
            } else {
                0.0
            }
        },
        tol,
    )
}

/// `int_a^inf f` for `f` oscillating with the given period and decaying
/// algebraically. Blocks covering a doubling number of whole periods are
/// summed until their ratio settles, then the remainder is extrapolated
/// geometrically.
pub fn integrate_oscillatory_tail<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    period: f64,
    tol: &Tolerance,
) -> Result<Estimate> {
    if !(period > 0.0) {
        return Err(Error::InvalidInput("period must be positive".into()));
    }
    const MAX_BLOCKS: usize = 17;
    let block_tol = Tolerance {
        abs: tol.abs * 0.01,
        max_intervals: usize::MAX,
        ..*tol
    };
    let mut sum = CompensatedSum::default();
    let mut error = 0.0;
    let mut blocks: Vec<f64> = Vec::new();
    let mut start = 0usize;
    for j in 0..MAX_BLOCKS {
        let count = if j == 0 { 2 } else { start };
        let breaks: Vec<f64> = (start..=start + count)
            .map(|k| a + k as f64 * period)
            .collect();
        let b = integrate_breaks(&f, &breaks, &block_tol)?;
        start += count;
        sum.add(b.value);
        error += b.error;
        blocks.push(b.value);
        let total = sum.value();
        if b.value.abs() <= 0.01 * tol.target(total) && j >= 2 {
            return Ok(Estimate { value: total, error });
        }
        let m = blocks.len();
        if m >= 4 {
            let r1 = blocks[m - 2] / blocks[m - 3];
            let r2 = blocks[m - 1] / blocks[m - 2];
            if r2.abs() < 1.0 && r1.abs() < 1.0 {
                let tail = b.value * r2 / (1.0 - r2);
                let tail_err = (tail - b.value * r1 / (1.0 - r1)).abs();
                if tail_err <= 0.1 * tol.target(total) || j + 1 == MAX_BLOCKS {
                    return Ok(Estimate {
                        value: total + tail,
                        error: error + tail_err,
                    });
                }
            } else if m >= 8 && r2 >= 0.99 && r1 >= 0.99 && count as f64 * period >= 4.0 * a.abs() {
                // blocks are now long compared with their distance from 0, so
                // a ratio near 1 is the decay rate and not a transient
                return Err(Error::NotIntegrable(
                    "oscillatory tail does not decay".into(),
                ));
            }
        }
    }
    Err(Error::NonConvergence {
        value: sum.value(),
        error: error + blocks.last().copied().unwrap_or(0.0).abs(),
    })
}

/// Local power-law exponent `k` with `f(r) ~ r^k`, from samples at `r` and `2r`.
pub fn power_exponent(f: impl Fn(f64) -> f64, r: f64) -> f64 {
    let (a, b) = (f(r).abs(), f(2.0 * r).abs());
    (b / a).ln() / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let e = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, &Tolerance::default()).unwrap();
        assert!((e.value - 0.0).abs() < 1e-14);
    }

    #[test]
    fn interior_kink_and_breaks() {
        let f = |x: f64| (x - 0.3).abs();
        let e = integrate_breaks(f, &[0.0, 0.3, 1.0], &Tolerance::default()).unwrap();
        assert!((e.value - (0.045 + 0.245)).abs() < 1e-14);
        let e = integrate(f, 0.0, 1.0, &Tolerance::default()).unwrap();
        assert!((e.value - 0.29).abs() < 1e-11);
    }

    #[test]
    fn mild_endpoint_singularity() {
        let e = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, &Tolerance::default()).unwrap();
        assert!((e.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn log_head_and_tail() {
        let tol = Tolerance::default();
        let head = integrate_from_zero(|r: f64| r.powf(-0.9), 1.0, &tol).unwrap();
        assert!((head.value - 10.0).abs() < 1e-9, "{head:?}");
        let tail = integrate_to_infinity(|r: f64| (1.0 + r).powi(-3), 1.0, &tol).unwrap();
        assert!((tail.value - 0.125).abs() < 1e-12, "{tail:?}");
        let gauss = integrate_to_infinity(|r: f64| (-r * r).exp(), 0.5, &tol).unwrap();
        // sqrt(pi)/2 erfc(1/2)
        let want = 0.424_945_919_039_966;
        assert!((gauss.value - want).abs() < 1e-13, "{} vs {want}", gauss.value);
    }

    #[test]
    fn divergence_is_detected() {
        let tol = Tolerance::default();
        assert!(matches!(
            integrate_to_infinity(|r: f64| 1.0 / r, 1.0, &tol),
            Err(Error::NotIntegrable(_))
        ));
        assert!(matches!(
            integrate_to_infinity(|r: f64| r.powf(-0.5), 1.0, &tol),
            Err(Error::NotIntegrable(_))
        ));
        assert!(matches!(
            integrate_from_zero(|r: f64| 1.0 / r, 1.0, &tol),
            Err(Error::NotIntegrable(_))
        ));
    }

    #[test]
    fn oscillatory_tail_sine_integral() {
        // int_pi^inf sin(r)/r dr = pi/2 - Si(pi)
        let si_pi = 1.851_937_051_982_466_2;
        let e = integrate_oscillatory_tail(|r: f64| r.sin() / r, PI, PI, &Tolerance::new(1e-10, 1e-8))
            .unwrap();
        assert!((e.value - (PI / 2.0 - si_pi)).abs() < 1e-8, "{e:?}");
    }

    #[test]
    fn non_convergence_carries_partial_value() {
        let tol = Tolerance {
            max_intervals: 20,
            ..Default::default()
        };
        match integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &tol) {
            Err(Error::NonConvergence { value, error }) => {
                assert!(value.is_finite() && error > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
