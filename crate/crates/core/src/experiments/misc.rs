use std::f64::consts::PI;

use super::report::{stem, ExperimentReport};
use crate::bessel::{zeros, BesselOrder};
use crate::conditions::{
    necessary_condition_radial, power_weight_admissible, ConditionReport, ExponentConfig, ScaleGrid, Verdict,
};
use crate::error::Result;
use crate::extremal::{
    best_constant_l2, dilation_exponent, dilation_sweep, ratio_ascent, RatioObjective, RatioRow, LOWER_BOUND,
};
use crate::numerics::RadialGrid;
use crate::transforms::{RadialProfile, TestFunctionFamily};
use crate::weights::Weight;

/// The first zeros of `J_alpha` against the large-argument positions
/// `(k + alpha/2 - 1/4) pi`.
pub fn run_bessel_table(alpha: f64, count: usize) -> Result<ExperimentReport> {
    let z = zeros(BesselOrder::new(alpha)?, count)?;
    let mut rep = ExperimentReport::new("bessel-table", "bessel-zeros", format!("bessel-table-{alpha}-{count}"));
    rep.param("alpha", alpha);
    rep.param("zeros", count);
    rep.rows = z
        .iter()
        .enumerate()
        .map(|(k, &x)| RatioRow::new((k + 1) as f64, x, (k as f64 + 1.0 + alpha / 2.0 - 0.25) * PI))
        .collect();
    // consecutive gaps, approaching pi from the side set by alpha
    let gaps = z.windows(2).enumerate().map(|(k, w)| RatioRow::new((k + 1) as f64, w[1] - w[0], PI)).collect();
    rep.tables.insert("gaps".into(), gaps);
    rep.summary.insert("zeros".into(), z.into());
    Ok(rep)
}

fn admissibility_gate(a: f64, b: f64, cfg: &ExponentConfig) -> ConditionReport {
    let adm = power_weight_admissible(a, b, cfg);
    let mut r = ConditionReport::new(
        "power-box",
        "power-weight-range",
        if adm.admissible { Verdict::Holds } else { Verdict::Fails },
        f64::NAN,
    );
    for c in adm.failed {
        r = r.note(format!("fails: {c}"));
    }
    r
}

/// Pitt ratio of Gaussian dilations for `u = |xi|^b`, `v = |x|^a`, with the
/// fitted and predicted log-log slopes.
pub fn run_dilation_sweep(a: f64, b: f64, cfg: &ExponentConfig, lambdas: &[f64]) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("dilation-sweep", "power-relation", stem("dilation-sweep", cfg.n, cfg.p, cfg.q));
    rep.param("n", cfg.n);
    rep.param("p", cfg.p);
    rep.param("q", cfg.q);
    rep.param("a", a);
    rep.param("b", b);
    rep.param("lambdas", lambdas.to_vec());
    rep.gate(admissibility_gate(a, b, cfg));
    let obj = RatioObjective::pitt(Weight::power(b), Weight::power(a), *cfg)?;
    rep.rows = dilation_sweep(&obj, &RadialProfile::gaussian(), lambdas)?;
    let (first, last) = (rep.rows[0], rep.rows[rep.rows.len() - 1]);
    let slope = if rep.rows.len() > 1 {
        (last.ratio / first.ratio).ln() / (last.parameter / first.parameter).ln()
    } else {
        0.0
    };
    let spread = rep.rows.iter().map(|r| (r.ratio / first.ratio - 1.0).abs()).fold(0.0, f64::max);
    rep.set("slope", slope);
    rep.set("predicted_slope", dilation_exponent(a, b, cfg));
    rep.set("max_relative_spread", spread);
    Ok(rep)
}

/// Lower bounds for the Pitt constant with `u`, `v`: member ratios of a
/// Gaussian dilation family, coordinate ascent over their span and, at
/// `p = q = 2`, power iteration on a radial grid.
pub fn run_extremal(u: &Weight, v: &Weight, cfg: &ExponentConfig, lambdas: &[f64], iterations: usize) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("extremal", "pitt-constant", stem("extremal", cfg.n, cfg.p, cfg.q));
    rep.param("n", cfg.n);
    rep.param("p", cfg.p);
    rep.param("q", cfg.q);
    rep.param("u", u.label());
    rep.param("v", v.label());
    rep.param("lambdas", lambdas.to_vec());
    rep.param("iterations", iterations);
    rep.gate(necessary_condition_radial(u, v, cfg, None, &ScaleGrid::default())?);
    let obj = RatioObjective::pitt(u.clone(), v.clone(), *cfg)?;
    rep.rows = dilation_sweep(&obj, &RadialProfile::gaussian(), lambdas)?;
    let family = TestFunctionFamily::dilations(&RadialProfile::gaussian(), lambdas)?;
    let est = ratio_ascent(&obj, &family, iterations)?;
    rep.set("ascent_lower_bound", est.value);
    rep.flag("ascent_converged", est.converged);
    if cfg.p == 2.0 && cfg.q == 2.0 {
        let grid = RadialGrid::composite_gauss(8.0, 32, 16)?;
        let l2 = best_constant_l2(u, v, cfg.n, &grid)?;
        rep.set("power_iteration_lower_bound", l2.value);
    }
    rep.tables.insert(
        "witness".into(),
        est.witness.iter().map(|&[r, f]| RatioRow { parameter: r, lhs: f, rhs: 1.0, ratio: f }).collect(),
    );
    rep.notes.push(format!("all constants are a {LOWER_BOUND}"));
    Ok(rep)
}
