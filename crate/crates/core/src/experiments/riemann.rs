use rayon::prelude::*;

use super::report::{stem, ExperimentReport};
use super::uncertainty::STABILITY;
use crate::conditions::{new_pitt_condition, ConditionReport, ExponentConfig, Verdict};
use crate::error::{Error, Result};
use crate::extremal::RatioRow;
use crate::numerics::{integrate_half_line, sphere_measure, Tail, Tolerance};
use crate::transforms::{
    classical_modulus_1d, modulus_omega, modulus_omega_fourier, transform_value, Decay, Function1d, RadialProfile,
};
use crate::weights::Weight;

/// Inputs of the Riemann–Lebesgue experiment.
#[derive(Debug, Clone)]
pub struct RiemannLebesgueSetup {
    pub cfg: ExponentConfig,
    pub f: RadialProfile,
    pub l: usize,
    /// `t = 2^k` for `k` from `t_min_exp` to `t_max_exp` in steps of `1 / per_octave`.
    pub t_min_exp: i32,
    pub t_max_exp: i32,
    pub per_octave: u32,
    /// Weight replacing `|xi|^(qn(1 - 1/p - 1/q))`, checked by the moment condition.
    pub u: Option<Weight>,
}

impl RiemannLebesgueSetup {
    pub fn new(cfg: ExponentConfig, f: RadialProfile, l: usize) -> Self {
        RiemannLebesgueSetup {
            cfg,
            f,
            l,
            t_min_exp: -8,
            t_max_exp: 2,
            per_octave: 1,
            u: None,
        }
    }

    fn t_grid(&self, per_octave: u32) -> Vec<f64> {
        let k = per_octave as i32;
        (self.t_min_exp * k..=self.t_max_exp * k).map(|j| 2f64.powf(j as f64 / k as f64)).collect()
    }
}

fn range_gate(cfg: &ExponentConfig) -> ConditionReport {
    let ok = cfg.n >= 2 && cfg.p > 1.0 && cfg.p <= 2.0 && cfg.p <= cfg.q && cfg.q <= cfg.p_conj;
    ConditionReport::new(
        "riemann-lebesgue-range",
        "modulus-range",
        if ok { Verdict::Holds } else { Verdict::Fails },
        f64::NAN,
    )
    .note("n >= 2, 1 < p <= 2, p <= q <= p'")
}

/// `(int [min(1, t|xi|)^(2l) |f^|]^q w)^(1/q)` with `w = u` or the power
/// `|xi|^(qn(1 - 1/p - 1/q))`.
pub fn rl_lhs(f: &RadialProfile, cfg: &ExponentConfig, l: usize, t: f64, u: Option<&Weight>) -> Result<f64> {
    let n = cfg.n;
    let power = Weight::power(cfg.q * n as f64 * (1.0 - 1.0 / cfg.p - 1.0 / cfg.q));
    let w = u.unwrap_or(&power);
    let e = 2 * l as i32;
    let nm1 = n as i32 - 1;
    let integrand = |rho: f64| {
        let g = (t * rho).min(1.0).powi(e) * transform_value(f, n, rho).unwrap_or(f64::NAN);
        if g == 0.0 {
            0.0
        } else {
            g.abs().powf(cfg.q) * w.radial(rho) * rho.powi(nm1)
        }
    };
    let mut breaks = vec![1.0 / t];
    let tail = match f.decay() {
        Decay::Gaussian { scale } => {
            breaks.push(12.0 / scale);
            Tail::None
        }
        Decay::Compact { radius } => {
            // |f^| oscillates with half period pi / R
            let step = std::f64::consts::PI / radius;
            breaks.extend((1..=64).map(|k| k as f64 * step));
            Tail::Oscillatory { period: step }
        }
        _ => Tail::Algebraic,
    };
    let reach = breaks.iter().copied().fold(0.0, f64::max);
    breaks.extend(w.breakpoints(reach));
    let v = integrate_half_line(integrand, &breaks, tail, &Tolerance::new(1e-300, 1e-10))?.value;
    Ok((sphere_measure(n) * v).powf(1.0 / cfg.q))
}

/// `Omega_l(f, t)_p`, from the transform side when `p = 2` and a closed-form
/// transform is available.
fn omega(f: &RadialProfile, cfg: &ExponentConfig, l: usize, t: f64) -> Result<f64> {
    if cfg.p == 2.0 && f.has_known_transform() {
        modulus_omega_fourier(f, cfg.n, l, t)
    } else {
        modulus_omega(f, cfg.n, l, t, cfg.p)
    }
}

fn table(s: &RiemannLebesgueSetup, ts: &[f64]) -> Result<Vec<RatioRow>> {
    ts.par_iter()
        .map(|&t| {
            Ok(RatioRow::new(
                t,
                rl_lhs(&s.f, &s.cfg, s.l, t, s.u.as_ref())?,
                omega(&s.f, &s.cfg, s.l, t)?,
            ))
        })
        .collect()
}

/// `|f^(xi)| / omega_l(f, 1/|xi|)_1` for the hat function on the line,
/// `|xi|` from 1 to 100.
pub fn classical_hat_table(l: usize) -> Result<Vec<RatioRow>> {
    let hat = Function1d::hat(1.0, 1.0 + 2.0 * l as f64)?;
    let xis: Vec<f64> = (0..=13).map(|k| 2f64.powf(k as f64 / 2.0)).chain([100.0]).collect();
    xis.par_iter()
        .map(|&xi| {
            let (re, im) = hat.fourier(xi)?;
            Ok(RatioRow::new(xi, re.hypot(im), classical_modulus_1d(&hat, l, 1.0 / xi, 1.0)?))
        })
        .collect()
}

/// LHS against `Omega_l(f, t)_p` on a dyadic `t`-grid, a fitted constant
/// and its value on the grid with twice as many points per octave.
pub fn run_riemann_lebesgue(s: &RiemannLebesgueSetup) -> Result<ExperimentReport> {
    let cfg = &s.cfg;
    if s.l == 0 || s.per_octave == 0 || s.t_min_exp > s.t_max_exp {
        return Err(Error::InvalidInput("need l >= 1 and a non-empty t-grid".into()));
    }
    let tag = if s.u.is_some() { "weighted-modulus-bound" } else { "modulus-bound" };
    let mut rep = ExperimentReport::new("riemann-lebesgue", tag, stem("riemann-lebesgue", cfg.n, cfg.p, cfg.q));
    rep.param("n", cfg.n);
    rep.param("p", cfg.p);
    rep.param("q", cfg.q);
    rep.param("l", s.l);
    rep.param("f", s.f.label());
    rep.param("t_exponents", vec![s.t_min_exp, s.t_max_exp]);
    rep.param("per_octave", s.per_octave);
    if let Some(u) = &s.u {
        rep.param("u", u.label());
        rep.gate(new_pitt_condition(u, cfg)?);
    } else {
        rep.gate(range_gate(cfg));
    }

    rep.rows = table(s, &s.t_grid(s.per_octave))?;
    let refined = table(s, &s.t_grid(2 * s.per_octave))?;
    if rep.rows.iter().any(|r| r.rhs == 0.0 && r.lhs > 0.0) {
        return Err(Error::NonConvergence { value: 0.0, error: f64::INFINITY });
    }
    let fit = |rows: &[RatioRow]| rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let (c, c2) = (fit(&rep.rows), fit(&refined));
    rep.set("fitted_c", c);
    rep.notes.push("C is fitted for this function only; uniformity over all f is not finitely checkable".into());
    rep.set("refined_c", c2);
    rep.flag("stable", c.is_finite() && (c2 / c - 1.0).abs() < STABILITY);
    rep.flag("lhs_finite", rep.rows.iter().all(|r| r.lhs.is_finite()));
    rep.tables.insert("refined".into(), refined);

    let classical = classical_hat_table(s.l)?;
    rep.set("classical_c", fit(&classical));
    rep.tables.insert("classical".into(), classical);
    Ok(rep)
}
