use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::config::{exponent_ranges, piecewise_restriction_admissible, recip, ExponentConfig};
use super::integrals::{half_line, radial_mass, to_infinity, Ends};
use super::report::{ConditionReport, Tolerances, Verdict};
use super::sweep::ScaleGrid;
use crate::bessel::{zeros, BesselOrder};
use crate::error::{Error, Result};
use crate::geometry::{body_integral, radial_dilation_bound, ConvexBody, Region, TranslatedUnion};
use crate::numerics::sphere_measure;
use crate::weights::{
    counterexample_power_integral, homogeneity_majorant, interval_translation_check, power, rearrangement,
    standard_intervals, IntervalMode, Weight, DEFAULT_INTERVAL_CAP,
};

/// `x^(1/q) y^(1/p')` with `0 * inf = 0`.
fn product(x: f64, q: f64, y: f64, pc: f64) -> f64 {
    if x == 0.0 || y == 0.0 {
        return 0.0;
    }
    x.powf(recip(q)) * y.powf(recip(pc))
}

fn sweep_tolerances(grid: &ScaleGrid) -> Tolerances {
    Tolerances {
        relative: grid.stability,
        ..Tolerances::default()
    }
}

fn dual_weight(v: &Weight, cfg: &ExponentConfig) -> Weight {
    v.powf(cfg.dual_power())
}

const GRID_DUAL_NOTE: &str = "v vanishes outside the grid box, so v^(1-p') is infinite on a set of infinite measure";

/// `sup_s (int_0^s u*)^(1/q) (int_0^(1/s) [(1/v)*]^(1/(p-1)))^(1/p')`.
pub fn heinig_condition(u: &Weight, v: &Weight, cfg: &ExponentConfig, grid: &ScaleGrid) -> Result<ConditionReport> {
    let tag = "rearrangement-sup";
    if !cfg.rearrangement_gate() {
        return Ok(ConditionReport::new("heinig", tag, Verdict::Inconclusive, f64::NAN)
            .note(format!("needs 1 < p <= q < inf, got p = {}, q = {}", cfg.p, cfg.q)));
    }
    let n = cfg.n;
    if matches!(v, Weight::TabulatedGrid(_)) {
        return Ok(ConditionReport::new("heinig", tag, Verdict::Fails, f64::INFINITY)
            .with_witness("s", 1.0)
            .note(GRID_DUAL_NOTE));
    }
    let ru = rearrangement(u, n)?;
    // [(1/v)*]^(1/(p-1)) is the rearrangement of v^(1-p')
    let rv = rearrangement(&dual_weight(v, cfg), n)?;
    let sup = grid.supremum(|s| Ok(product(ru.head_integral(s)?, cfg.q, rv.head_integral(1.0 / s)?, cfg.p_conj)))?;
    let mut report = ConditionReport::new("heinig", tag, sup.verdict, sup.value)
        .with_witness("s", sup.witness)
        .with_tolerances(sweep_tolerances(grid))
        .note(format!("running maximum per refinement: {:?}", sup.levels));
    if ru.unbounded_head && sup.value.is_infinite() {
        report = report.note("u* is not integrable at 0: u has infinite integral over a set of finite measure");
    }
    Ok(report)
}

/// A set `A` and its dual set for the polar-body condition: either one
/// body with `c A*`, or unions of disjoint translates of both.
#[derive(Debug, Clone, PartialEq)]
pub enum TestSet {
    Body(ConvexBody),
    Translates {
        base: ConvexBody,
        physical: Vec<Vec<f64>>,
        frequency: Vec<Vec<f64>>,
    },
}

impl TestSet {
    /// `(A, c A*)` as integration regions.
    pub fn regions(&self, c: f64) -> Result<(Region, Region)> {
        match self {
            TestSet::Body(b) => Ok((Region::Body(b.clone()), Region::Body(b.dilated_polar(c)?))),
            TestSet::Translates {
                base,
                physical,
                frequency,
            } => {
                let a = TranslatedUnion::new(base.clone(), physical.clone())?;
                let d = TranslatedUnion::new(base.dilated_polar(c)?, frequency.clone())?;
                Ok((Region::Union(a), Region::Union(d)))
            }
        }
    }
}

/// `(int_{cA*} u)^(1/q) (int_A v^(1-p'))^(1/p')` over a family of sets,
/// ordered by the parameter. The largest product estimates the supremum;
/// a product still growing by more than `stability` across the last three
/// members reads as divergence.
pub fn necessary_condition_general(
    u: &Weight,
    v: &Weight,
    family: &[(f64, TestSet)],
    c: f64,
    cfg: &ExponentConfig,
) -> Result<ConditionReport> {
    let tag = "polar-body-product";
    if !(c > 0.0 && c < PI / 2.0) {
        return Err(Error::Domain(format!("the dilation must satisfy 0 < c < pi/2, got {c}")));
    }
    if family.is_empty() {
        return Err(Error::InvalidInput("empty body family".into()));
    }
    if !cfg.necessary_gate() {
        return Ok(ConditionReport::new("nec-general", tag, Verdict::Inconclusive, f64::NAN)
            .note(format!("needs 1 < p, q < inf, got p = {}, q = {}", cfg.p, cfg.q)));
    }
    let dual = dual_weight(v, cfg);
    let mut products = Vec::with_capacity(family.len());
    for (_, set) in family {
        let (a, b) = set.regions(c)?;
        let fu = body_integral(u, &b, cfg.n)?;
        let fv = body_integral(&dual, &a, cfg.n)?;
        products.push(product(fu, cfg.q, fv, cfg.p_conj));
    }
    let mut best = 0;
    for (i, x) in products.iter().enumerate() {
        if *x > products[best] {
            best = i;
        }
    }
    let value = products[best];
    let stability = 5e-3;
    let tail = &products[products.len().saturating_sub(4)..];
    let growing = tail.len() == 4 && tail.windows(2).all(|w| w[1] > w[0] * (1.0 + stability));
    let verdict = if value.is_infinite() || growing {
        Verdict::Fails
    } else {
        Verdict::Holds
    };
    let mut report = ConditionReport::new("nec-general", tag, verdict, value)
        .with_witness("family-parameter", family[best].0)
        .with_tolerances(Tolerances {
            relative: stability,
            ..Tolerances::default()
        })
        .note(format!("c = {c}; products over the family: {products:?}"));
    if growing {
        report = report.note("product still growing across the last members");
    }
    Ok(report)
}

/// Breakpoints of each weight added to a scale sweep.
const MAX_SEEDS: usize = 512;

/// Default `c_n = 0.99 q_{n/2-1}`.
pub fn default_radial_constant(n: usize) -> f64 {
    0.99 * radial_dilation_bound(n)
}

/// `sup_s (int_{|x|<s} u)^(1/q) (int_{|x|<c_n/s} v^(1-p'))^(1/p')`.
pub fn necessary_condition_radial(
    u: &Weight,
    v: &Weight,
    cfg: &ExponentConfig,
    c_n: Option<f64>,
    grid: &ScaleGrid,
) -> Result<ConditionReport> {
    let tag = "ball-product";
    let n = cfg.n;
    let bound = radial_dilation_bound(n);
    let c = c_n.unwrap_or_else(|| default_radial_constant(n));
    if !(c > 0.0 && c < bound) {
        return Err(Error::Domain(format!("c_n must lie in (0, {bound}), got {c}")));
    }
    if !cfg.necessary_gate() {
        return Ok(ConditionReport::new("nec-radial", tag, Verdict::Inconclusive, f64::NAN)
            .note(format!("needs 1 < p, q < inf, got p = {}, q = {}", cfg.p, cfg.q)));
    }
    let dual = dual_weight(v, cfg);
    let top = 2f64.powi(grid.max_exp);
    // the product peaks where a mass jumps or kinks
    let mut seeds: Vec<f64> = u.breakpoints(top).into_iter().take(MAX_SEEDS).collect();
    seeds.extend(dual.breakpoints(top).into_iter().take(MAX_SEEDS).map(|b| c / b));
    let sup = grid.supremum_with(&seeds, |s| {
        Ok(product(radial_mass(u, s, n)?, cfg.q, radial_mass(&dual, c / s, n)?, cfg.p_conj))
    })?;
    Ok(ConditionReport::new("nec-radial", tag, sup.verdict, sup.value)
        .with_witness("s", sup.witness)
        .with_tolerances(sweep_tolerances(grid))
        .note(format!("c_n = {c}"))
        .note(format!("running maximum per refinement: {:?}", sup.levels)))
}

/// `int_0^inf rho^kappa u0(rho) m(rho) d rho` for a radial `u` and an
/// optional radial multiplier `m`.
fn moment_integral(u: &Weight, kappa: f64, m: Option<&Weight>, n: usize) -> Result<f64> {
    let m = m.filter(|w| !matches!(w, Weight::Power { a } if *a == 0.0));
    if !u.is_radial() || m.is_some_and(|w| !w.is_radial()) {
        return Err(Error::InvalidInput("moment conditions need radial weights".into()));
    }
    if let Weight::Counterexample { n: wn } = u {
        if *wn != n {
            return Err(Error::InvalidInput(format!("counterexample weight built for n = {wn}, used with n = {n}")));
        }
        // int rho^kappa u0 = int rho^(-a) u0 rho^(n-1) with a = n - 1 - kappa
        let gamma = match m {
            None => 0.0,
            Some(Weight::Power { a }) => *a,
            Some(other) => {
                return Err(Error::Unsupported(format!(
                    "shell weight with multiplier {}",
                    other.label()
                )))
            }
        };
        return Ok(counterexample_power_integral(n, n as f64 - 1.0 - kappa - gamma));
    }
    let ends = match (u.head_exponent(), u.tail_exponent(), m) {
        (Some(h), Some(t), None) => Ends::Known {
            head: kappa + h,
            tail: kappa + t,
        },
        (Some(h), Some(t), Some(w)) => match (w.head_exponent(), w.tail_exponent()) {
            (Some(wh), Some(wt)) => Ends::Known {
                head: kappa + h + wh,
                tail: kappa + t + wt,
            },
            _ => Ends::Fitted,
        },
        _ => Ends::Fitted,
    };
    let mut breaks = u.breakpoints(1e8);
    if let Some(w) = m {
        breaks.extend(w.breakpoints(1e8));
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let f = |r: f64| {
        let x = u.radial(r);
        if x == 0.0 {
            return 0.0;
        }
        let y = m.map_or(1.0, |w| w.radial(r));
        power(r, kappa) * x * y
    };
    half_line(f, &breaks, ends)
}

fn moment_report(condition: &str, tag: &str, value: f64) -> ConditionReport {
    let verdict = if value.is_finite() { Verdict::Holds } else { Verdict::Fails };
    ConditionReport::new(condition, tag, verdict, value)
}

/// `int_0^inf rho^(n-1-qn/p') u0(rho) d rho < inf`, valid as a sufficient
/// condition for `1 <= p < 2(n+2)/(n+4)` and `1 <= q <= (n-1)/(n+1) p'`.
pub fn new_pitt_condition(u: &Weight, cfg: &ExponentConfig) -> Result<ConditionReport> {
    let tag = "moment-integral";
    if cfg.n < 2 {
        return Err(Error::InvalidInput("the moment condition needs n >= 2".into()));
    }
    let value = moment_integral(u, cfg.moment_exponent(), None, cfg.n)?;
    let ranges = exponent_ranges(cfg);
    let mut report = moment_report("new-pitt", tag, value);
    if !(ranges.tao && ranges.q_gate) {
        report.verdict = Verdict::Inconclusive;
        if !ranges.tao {
            report = report.note(format!("p = {} outside [1, {})", cfg.p, ranges.tao_bound));
        }
        if !ranges.q_gate {
            report = report.note(format!("q = {} outside [1, {}]", cfg.q, ranges.q_bound));
        }
        return Ok(report);
    }
    if value.is_finite() {
        report = report.note(format!(
            "constant C = C'(n, p, q) * {} (the integral to the power 1/q)",
            value.powf(1.0 / cfg.q)
        ));
    }
    if let Some(h) = u.head_exponent().filter(|_| value.is_infinite()) {
        let k = cfg.moment_exponent();
        report = report.note(format!("integrand exponents: head {}, tail {}", k + h, k + u.tail_exponent().unwrap_or(h)));
    }
    Ok(report)
}

/// `int_0^inf rho^(n-1-qn/p') u0(rho) w(rho)^(q/p) d rho < inf` for a
/// homogeneity majorant `w` of `v`.
pub fn theorem31_condition(u: &Weight, w: &Weight, cfg: &ExponentConfig) -> Result<ConditionReport> {
    let m = w.powf(cfg.q * recip(cfg.p));
    let value = moment_integral(u, cfg.moment_exponent(), Some(&m), cfg.n)?;
    Ok(moment_report("thm31", "majorant-moment-integral", value)
        .note("sufficient together with a restriction inequality for v"))
}

/// The majorant condition for a piecewise power `v`, gated on the range
/// where the restriction inequality with that `v` is known.
pub fn piecewise_pitt_condition(u: &Weight, alpha: f64, beta: f64, cfg: &ExponentConfig) -> Result<ConditionReport> {
    let w = homogeneity_majorant(&Weight::piecewise(alpha, beta))?;
    let mut report = theorem31_condition(u, &w, cfg)?;
    report.condition = "thm31-piecewise".into();
    report.equation_tag = "piecewise-majorant-moment".into();
    let gate = piecewise_restriction_admissible(alpha, beta, cfg);
    if !gate.admissible {
        report.verdict = Verdict::Inconclusive;
        for c in gate.failed {
            report = report.note(format!("restriction range clause fails: {c}"));
        }
    }
    Ok(report)
}

/// The `p = q = 2` form `int_0^inf rho^(-1) u0 w < inf` for a majorant `w`
/// of a Campanato–Morrey weight `V` in `L^(alpha, r)`, gated on
/// `2n/(n+1) < alpha <= n` and `alpha/n <= 1/r < 2(alpha-1)/(n-1)`.
pub fn campanato_pitt_condition(u: &Weight, w: &Weight, alpha: f64, r: f64, n: usize) -> Result<ConditionReport> {
    let value = moment_integral(u, -1.0, Some(w), n)?;
    let mut report = moment_report("thm31-campanato", "campanato-moment", value)
        .note("V must also have finite Campanato-Morrey norm");
    let nf = n as f64;
    let clauses = [
        ("n >= 2", n >= 2),
        ("2n/(n+1) < alpha <= n", 2.0 * nf / (nf + 1.0) < alpha && alpha <= nf),
        ("alpha/n <= 1/r", alpha / nf <= 1.0 / r),
        ("1/r < 2(alpha-1)/(n-1)", n >= 2 && 1.0 / r < 2.0 * (alpha - 1.0) / (nf - 1.0)),
    ];
    for (name, ok) in clauses {
        if !ok {
            report.verdict = Verdict::Inconclusive;
            report = report.note(format!("Campanato-Morrey range clause fails: {name}"));
        }
    }
    Ok(report)
}

fn tail_exponent_of(v: &Weight) -> f64 {
    v.tail_exponent()
        .unwrap_or_else(|| crate::numerics::power_exponent(|r| v.radial(r), 1e12))
}

fn head_exponent_of(v: &Weight) -> f64 {
    v.head_exponent()
        .unwrap_or_else(|| crate::numerics::power_exponent(|r| v.radial(r), 1e-12))
}

/// `int v^(1-p')(x) |j_{n/2-1}(|x|)|^(p') dx < inf`.
pub fn prop_nec1_condition(v: &Weight, cfg: &ExponentConfig) -> Result<ConditionReport> {
    let tag = "bessel-moment";
    if !(cfg.p > 1.0 && cfg.p.is_finite()) {
        return Ok(ConditionReport::new("prop-nec1", tag, Verdict::Inconclusive, f64::NAN)
            .note(format!("needs 1 < p < inf, got {}", cfg.p)));
    }
    if matches!(v, Weight::TabulatedGrid(_)) {
        return Ok(ConditionReport::new("prop-nec1", tag, Verdict::Fails, f64::INFINITY).note(GRID_DUAL_NOTE));
    }
    let n = cfg.n;
    let pc = cfg.p_conj;
    let e = cfg.dual_power();
    let nm1 = n as f64 - 1.0;
    let order = BesselOrder::for_dimension(n);
    // |j|^(p') r^(n-1) ~ r^(n-1 - p'(n-1)/2) up to a bounded oscillating factor
    let head = head_exponent_of(v) * e + nm1;
    let tail = tail_exponent_of(v) * e + nm1 - pc * nm1 / 2.0;
    let f = |r: f64| {
        let x = v.radial(r);
        if x.is_infinite() {
            return 0.0;
        }
        power(x, e) * order.normalized(r).abs().powf(pc) * power(r, nm1)
    };
    let mut breaks = zeros(order, 64)?;
    breaks.extend(v.breakpoints(breaks[breaks.len() - 1]));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let value = if head <= -1.0 || tail >= -1.0 {
        f64::INFINITY
    } else {
        let last = breaks[breaks.len() - 1];
        let body = to_infinity(
            crate::numerics::integrate_half_line(&f, &breaks, crate::numerics::Tail::None, &super::integrals::tolerance())
                .map(|e| e.value),
        )?;
        let rest = to_infinity(
            crate::numerics::integrate_oscillatory_tail(&f, last, PI, &super::integrals::tolerance()).map(|e| e.value),
        )?;
        sphere_measure(n) * (body + rest)
    };
    Ok(moment_report("prop-nec1", tag, value).note(format!("integrand exponents: head {head}, tail {tail}")))
}

/// `int v^(1-p')(x) (1+|x|)^(-p'(n-1)/2) dx < inf`, reported only when one of
/// the interval translation conditions holds for `v0^(1-p')`.
pub fn cor_nec2_condition(v: &Weight, cfg: &ExponentConfig) -> Result<ConditionReport> {
    let tag = "decay-moment";
    if !(cfg.p > 1.0 && cfg.p.is_finite()) {
        return Ok(ConditionReport::new("cor-nec2", tag, Verdict::Inconclusive, f64::NAN)
            .note(format!("needs 1 < p < inf, got {}", cfg.p)));
    }
    if !v.is_radial() {
        return Err(Error::InvalidInput("the decay condition needs a radial weight".into()));
    }
    let intervals = standard_intervals();
    let mut gates = Vec::new();
    for mode in [IntervalMode::Vs1, IntervalMode::Vs2] {
        let r = interval_translation_check(v, cfg.p, mode, &intervals, DEFAULT_INTERVAL_CAP)?;
        gates.push((mode, r.verdict, r.value));
    }
    let n = cfg.n;
    let pc = cfg.p_conj;
    let e = cfg.dual_power();
    let nm1 = n as f64 - 1.0;
    let decay = -pc * nm1 / 2.0;
    let f = |r: f64| {
        let x = v.radial(r);
        if x.is_infinite() {
            return 0.0;
        }
        power(x, e) * (1.0 + r).powf(decay) * power(r, nm1)
    };
    let ends = Ends::Known {
        head: head_exponent_of(v) * e + nm1,
        tail: tail_exponent_of(v) * e + nm1 + decay,
    };
    let value = sphere_measure(n) * half_line(f, &v.breakpoints(1e8), ends)?;
    let mut report = moment_report("cor-nec2", tag, value);
    for (mode, verdict, ratio) in &gates {
        report = report.note(format!("gate {mode}: {verdict} (max ratio {ratio})"));
    }
    if !gates.iter().any(|g| g.1 == Verdict::Holds) {
        report.verdict = Verdict::Inconclusive;
        report = report.note("neither translation condition holds, so the decay condition is not implied");
    }
    Ok(report)
}

/// `|f|^(p-s)` and the two norm identities behind inserting it as a weight.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Insertion {
    pub p: f64,
    pub s: f64,
    /// `|| w^(1/s) f ||_s^s`.
    pub weighted_norm_pow: f64,
    /// `|| f ||_p^p`.
    pub norm_pow: f64,
    /// `|| w^(-1) ||_(p/(s-p))^(1/s)`.
    #[serde(with = "super::real")]
    pub inverse_norm: f64,
    /// `|| f ||_p^(1 - p/s)`.
    pub inverse_bound: f64,
    #[serde(skip)]
    pub w: Option<Weight>,
}

/// Build `w = |f|^(p-s)` and verify `|| w^(1/s) f ||_s^s = || f ||_p^p` and
/// `|| w^(-1) ||_(p/(s-p))^(1/s) = || f ||_p^(1-p/s)` to `1e-8`.
pub fn weight_insertion(f: &crate::transforms::RadialProfile, cfg: &ExponentConfig, s: f64) -> Result<Insertion> {
    use crate::numerics::{lp_norm_profile, weighted_lp_norm};
    let (p, n) = (cfg.p, cfg.n);
    if !(s >= p) || !s.is_finite() || !p.is_finite() {
        return Err(Error::InvalidInput(format!("need p <= s < inf, got p = {p}, s = {s}")));
    }
    let norm = lp_norm_profile(f, p, n)?;
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidInput("f must be nonzero with finite L^p norm".into()));
    }
    let norm_pow = norm.powf(p);
    if s == p {
        return Ok(Insertion {
            p,
            s,
            weighted_norm_pow: norm_pow,
            norm_pow,
            inverse_norm: 0.0,
            inverse_bound: 1.0,
            w: Some(Weight::constant()),
        });
    }
    let g = f.evaluator();
    let mut breaks = f.breaks().to_vec();
    if let Some(r) = f.truncation_radius() {
        breaks.push(r);
    }
    let w = {
        let g = g.clone();
        Weight::radial_fn(format!("|{}|^{}", f.label(), p - s), breaks, move |r| power(g(r).abs(), p - s))
    };
    let weighted_norm_pow = weighted_lp_norm(f, &w, s, n)?.powf(s);
    let r = p / (s - p);
    let one = crate::transforms::RadialProfile::constant(1.0);
    let inv = weighted_lp_norm(&one, &w.powf(-r), 1.0, n)?;
    let inverse_norm = inv.powf(1.0 / r).powf(1.0 / s);
    let inverse_bound = norm.powf(1.0 - p / s);
    for (a, b, what) in [
        (weighted_norm_pow, norm_pow, "weighted norm"),
        (inverse_norm, inverse_bound, "inverse weight norm"),
    ] {
        if (a - b).abs() > 1e-8 * b.abs() {
            return Err(Error::InvalidInput(format!("{what} identity off: {a} vs {b}")));
        }
    }
    Ok(Insertion {
        p,
        s,
        weighted_norm_pow,
        norm_pow,
        inverse_norm,
        inverse_bound,
        w: Some(w),
    })
}
