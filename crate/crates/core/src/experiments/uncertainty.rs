use super::report::{stem, ExperimentReport};
use crate::conditions::{new_pitt_condition, piecewise_pitt_condition, ConditionReport, ExponentConfig, Verdict};
use crate::error::{Error, Result};
use crate::extremal::{transform_profile, RatioRow};
use crate::numerics::weighted_lp_norm;
use crate::transforms::RadialProfile;
use crate::weights::Weight;

/// `int |x|^2 |f|^2 int |xi|^2 |f^|^2 / ||f||_2^4` for radial `f`; the
/// infima over translations sit at the origin by symmetry.
pub fn heisenberg_product(f: &RadialProfile, n: usize) -> Result<f64> {
    let hat = transform_profile(f, n)?;
    let x = weighted_lp_norm(f, &Weight::power(2.0), 2.0, n)?.powi(2);
    let xi = weighted_lp_norm(&hat, &Weight::power(2.0), 2.0, n)?.powi(2);
    let m = weighted_lp_norm(f, &Weight::constant(), 2.0, n)?.powi(2);
    Ok(x * xi / (m * m))
}

/// Inputs of the uncertainty experiment.
#[derive(Debug, Clone)]
pub struct UncertaintySetup {
    pub cfg: ExponentConfig,
    /// Fourier-side weight `s0`, entering as `s0^(1/q) |xi| f^` in `L^(q')`.
    pub s0: Weight,
    /// Weight on `|x| f`; constant or piecewise power.
    pub v: Weight,
    pub base: RadialProfile,
    pub lambdas: Vec<f64>,
}

/// The Cor 6.2 example weight `rho^-m (1+rho)^(m + n - qn/p' + eps)`.
pub fn decay_example_weight(cfg: &ExponentConfig, m: f64, eps: f64) -> Weight {
    let e = m + cfg.n as f64 - cfg.q * cfg.n as f64 / cfg.p_conj + eps;
    Weight::radial_fn(format!("r^-{m} (1+r)^{e}"), vec![], move |r: f64| r.powf(-m) * (1.0 + r).powf(e))
}

fn ratios(s: &UncertaintySetup, lambdas: &[f64]) -> Result<Vec<RatioRow>> {
    let cfg = &s.cfg;
    let n = cfg.n;
    let fourier = s.s0.powf(cfg.q_conj / cfg.q);
    let space = s.v.clone();
    lambdas
        .iter()
        .map(|&l| {
            let f = s.base.dilate(l);
            let hat = transform_profile(&f, n)?;
            let lhs = weighted_lp_norm(&f, &Weight::constant(), 2.0, n)?.powi(2);
            let a = weighted_lp_norm(&times_r(&hat), &fourier, cfg.q_conj, n)?;
            let b = weighted_lp_norm(&times_r(&f), &space, cfg.p, n)?;
            Ok(RatioRow::new(l, lhs, a * b))
        })
        .collect()
}

fn times_r(f: &RadialProfile) -> RadialProfile {
    let g = f.evaluator();
    RadialProfile::from_fn(format!("r {}", f.label()), f.decay(), f.breaks().to_vec(), move |r| r * g(r))
        .expect("Gaussian and compact decay survive a factor r")
}

/// Geometric midpoints inserted between consecutive parameters.
pub(crate) fn refine_geometric(xs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * xs.len());
    for w in xs.windows(2) {
        out.push(w[0]);
        out.push((w[0] * w[1]).sqrt());
    }
    out.extend(xs.last());
    out
}

/// Relative change of the fitted constant allowed under refinement.
pub const STABILITY: f64 = 0.02;

/// Heisenberg baseline plus the weighted uncertainty inequality on a
/// dilation family, with `C = max lhs/rhs` refitted on a refined family.
pub fn run_uncertainty(s: &UncertaintySetup) -> Result<ExperimentReport> {
    let cfg = &s.cfg;
    let n = cfg.n;
    if !(cfg.q > 1.0) {
        return Err(Error::InvalidInput("the uncertainty inequality needs q > 1".into()));
    }
    if s.lambdas.is_empty() {
        return Err(Error::InvalidInput("need at least one dilation".into()));
    }
    let mut rep = ExperimentReport::new("uncertainty", "weighted-uncertainty", stem("uncertainty", n, cfg.p, cfg.q));
    rep.param("n", n);
    rep.param("p", cfg.p);
    rep.param("q", cfg.q);
    rep.param("s0", s.s0.label());
    rep.param("v", s.v.label());
    rep.param("base", s.base.label());
    rep.param("lambdas", s.lambdas.clone());

    let u = s.s0.powf(-1.0);
    let gate = match s.v {
        Weight::Power { a } if a == 0.0 => new_pitt_condition(&u, cfg)?,
        Weight::Piecewise { alpha, beta } => piecewise_pitt_condition(&u, alpha, beta, cfg)?,
        _ => ConditionReport::new("uncertainty-gate", "weighted-uncertainty", Verdict::Inconclusive, f64::NAN)
            .note("no sufficient condition is implemented for this v"),
    };
    rep.gate(gate);

    let heis = heisenberg_product(&RadialProfile::gaussian(), n)?;
    let nf = n as f64;
    rep.set("heisenberg_product", heis);
    rep.set("heisenberg_bound", (2.0 * std::f64::consts::PI).powi(n as i32) * nf * nf / 4.0);

    rep.rows = ratios(s, &s.lambdas)?;
    let fitted = rep.rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let refined = ratios(s, &refine_geometric(&s.lambdas))?;
    let refitted = refined.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let finite = rep.rows.iter().all(|r| r.rhs.is_finite() && r.rhs > 0.0);
    if !finite {
        rep.notes.push("a right-hand factor is infinite or zero; no verdict".into());
    }
    rep.set("fitted_c", fitted);
    rep.notes.push("C is fitted for this function only; uniformity over all f is not finitely checkable".into());
    rep.set("refined_c", refitted);
    rep.flag("stable", finite && (refitted / fitted - 1.0).abs() < STABILITY);
    rep.tables.insert("refined".into(), refined);
    Ok(rep)
}
