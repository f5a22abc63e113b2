use std::path::Path;

use serde::{Deserialize, Serialize};

use super::objective::{DiscreteObjective, Discretization, RatioObjective};
use crate::error::{Error, Result};
use crate::transforms::TestFunctionFamily;

/// Label carried by every estimate: the constants are never claimed sharp.
pub const LOWER_BOUND: &str = "lower bound";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    pub label: String,
    #[serde(with = "crate::conditions::real")]
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the estimate keeps growing under refinement.
    pub unbounded: bool,
    /// Best value after each iteration (or each grid, for refinements).
    pub history: Vec<f64>,
    /// The best profile as `(r, f0(r))` rows.
    pub witness: Vec<[f64; 2]>,
}

impl RatioEstimate {
    pub(crate) fn new(value: f64, history: Vec<f64>, converged: bool, witness: Vec<[f64; 2]>) -> Self {
        RatioEstimate {
            label: LOWER_BOUND.into(),
            value,
            iterations: history.len(),
            converged,
            unbounded: false,
            history,
            witness,
        }
    }

    /// Write the witness profile as a two-column CSV `r,f0`.
    pub fn write_witness_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
        w.write_record(["r", "f0"]).map_err(|e| Error::Io(e.to_string()))?;
        for [r, f] in &self.witness {
            w.write_record([r.to_string(), f.to_string()]).map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

const MIN_STEP: f64 = 1e-6;

/// Coordinate ascent over linear combinations of the family members,
/// started from the best single member. Each accepted step raises the
/// discretized ratio, so the history is non-decreasing.
pub fn ratio_ascent(obj: &RatioObjective, family: &TestFunctionFamily, iterations: usize) -> Result<RatioEstimate> {
    let disc = Discretization::for_family(family, obj)?;
    ascend(obj, &disc, iterations)
}

/// [`ratio_ascent`] on a prepared discretization.
pub fn ascend(obj: &RatioObjective, disc: &Discretization, iterations: usize) -> Result<RatioEstimate> {
    let d = DiscreteObjective::new(obj, disc);
    let m = disc.members();
    let unit = |k: usize| {
        let mut c = vec![0.0; m];
        c[k] = 1.0;
        c
    };
    let start = (0..m)
        .filter_map(|k| d.ratio(&unit(k)).map(|r| (k, r)))
        .max_by(|a, b| a.1.total_cmp(&b.1));
    let Some((k0, mut best)) = start else {
        return Err(Error::InvalidInput(
            "every family member has a zero or infinite right-hand side".into(),
        ));
    };
    let mut c = unit(k0);
    let mut history = vec![best];
    let mut step = 0.5;
    let mut converged = false;
    for _ in 0..iterations {
        let mut improved = false;
        for k in 0..m {
            for s in [step, -step] {
                let mut trial = c.clone();
                trial[k] += s;
                if let Some(r) = d.ratio(&trial) {
                    if r > best {
                        best = r;
                        c = trial;
                        improved = true;
                    }
                }
            }
        }
        // the ratio is homogeneous, so keep the coefficients at unit size
        let top = c.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        c.iter_mut().for_each(|x| *x /= top);
        history.push(best);
        if !improved {
            step *= 0.5;
            if step < MIN_STEP {
                converged = true;
                break;
            }
        }
    }
    let f = disc.combine(&c);
    let witness = disc.space.nodes.iter().zip(f).map(|(&r, v)| [r, v]).collect();
    Ok(RatioEstimate::new(best, history, converged, witness))
}
