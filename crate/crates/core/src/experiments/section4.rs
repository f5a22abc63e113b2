use super::report::{stem, ExperimentReport};
use crate::conditions::{heinig_condition, new_pitt_condition, radial_mass, ExponentConfig, ScaleGrid};
use crate::error::{Error, Result};
use crate::extremal::RatioRow;
use crate::numerics::{hurwitz_zeta, sphere_measure};
use crate::weights::{counterexample_partial_mass, counterexample_set_bound, counterexample_set_measure, Weight};

/// The shell weight separating the moment condition from the rearrangement
/// condition: the moment integral, `I(N)` against `ln N`, the envelope
/// `int_0^s u0 r^(n-1) <= 1 + ln(s+1)` on `s = 2^0..2^20`, and the failing
/// rearrangement check with its witness.
pub fn run_section4(cfg: &ExponentConfig, big_ns: &[u64]) -> Result<ExperimentReport> {
    let n = cfg.n;
    let a = cfg.q * n as f64 / cfg.p_conj;
    if !(a > 0.0) {
        return Err(Error::InvalidInput(format!("need a = qn/p' > 0, got {a}")));
    }
    if big_ns.iter().any(|&k| k < 2) {
        return Err(Error::InvalidInput("shell counts must be at least 2".into()));
    }
    let mut rep = ExperimentReport::new("section4", "shell-weight-separation", stem("section4", n, cfg.p, cfg.q));
    rep.param("n", n);
    rep.param("p", cfg.p);
    rep.param("q", cfg.q);
    rep.param("N", big_ns.to_vec());
    let u = Weight::counterexample(n);

    let moment = new_pitt_condition(&u, cfg)?;
    rep.set("a", a);
    rep.set("moment_integral", moment.value);
    rep.set("zeta_bound", hurwitz_zeta(1.0 + a, 1));
    rep.gate(moment);

    rep.rows = big_ns
        .iter()
        .map(|&big_n| RatioRow::new(big_n as f64, counterexample_partial_mass(n, big_n), (big_n as f64).ln()))
        .collect();
    let top = *big_ns.iter().max().unwrap_or(&2);
    rep.set("set_measure", counterexample_set_measure(n, top));
    rep.set("set_bound", counterexample_set_bound(n));

    // the necessary ball condition reduces to sup_s s^-a int_0^s u0 r^(n-1)
    let omega = sphere_measure(n);
    let envelope = (0..=20)
        .map(|k| {
            let s = 2f64.powi(k);
            Ok(RatioRow::new(s, radial_mass(&u, s, n)? / omega, 1.0 + (s + 1.0).ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    let holds = envelope.iter().all(|r| r.lhs <= r.rhs);
    let sup = envelope.iter().map(|r| r.lhs * r.parameter.powf(-a)).fold(0.0, f64::max);
    rep.flag("envelope_holds", holds);
    rep.set("envelope_sup", sup);
    rep.tables.insert("envelope".into(), envelope);

    let heinig = heinig_condition(&u, &Weight::constant(), cfg, &ScaleGrid::default())?;
    rep.set("heinig_value", heinig.value);
    if let Some(w) = &heinig.witness {
        rep.set("heinig_witness", w.value);
    }
    rep.checks.push(heinig);
    Ok(rep)
}
