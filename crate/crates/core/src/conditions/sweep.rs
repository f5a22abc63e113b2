use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::Verdict;
use crate::error::{Error, Result};

/// Dyadic grid `s = 2^k` for a supremum over `s > 0`. Each doubling halves
/// the exponent step and widens the range by `widen` octaves per side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleGrid {
    pub min_exp: i32,
    pub max_exp: i32,
    pub widen: i32,
    pub max_doublings: u32,
    /// Relative change of the running maximum counted as stable.
    pub stability: f64,
    /// Consecutive growths that count as divergence.
    pub growths_to_fail: u32,
}

impl Default for ScaleGrid {
    fn default() -> Self {
        ScaleGrid {
            min_exp: -20,
            max_exp: 20,
            widen: 10,
            max_doublings: 4,
            stability: 5e-3,
            growths_to_fail: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SupResult {
    pub value: f64,
    pub witness: f64,
    pub verdict: Verdict,
    /// Running maximum after each level.
    pub levels: Vec<f64>,
}

impl ScaleGrid {
    fn exponents(&self, level: u32) -> Vec<f64> {
        let step = 0.5f64.powi(level as i32);
        let lo = (self.min_exp - self.widen * level as i32) as f64;
        let hi = (self.max_exp + self.widen * level as i32) as f64;
        let count = ((hi - lo) / step).round() as i64;
        (0..=count).map(|k| lo + k as f64 * step).collect()
    }

    /// Sup of `eval` over the grid, refined until it settles or keeps growing.
    pub(crate) fn supremum(&self, eval: impl Fn(f64) -> Result<f64> + Sync) -> Result<SupResult> {
        self.supremum_with(&[], eval)
    }

    /// As [`Self::supremum`], with extra scales where `eval` may peak
    /// (kinks and jumps) evaluated from the start.
    pub(crate) fn supremum_with(&self, extra: &[f64], eval: impl Fn(f64) -> Result<f64> + Sync) -> Result<SupResult> {
        let mut cache: BTreeMap<u64, f64> = BTreeMap::new();
        let lo = self.min_exp as f64;
        let hi = self.max_exp as f64;
        let seeds: Vec<f64> = extra
            .iter()
            .filter(|s| **s > 0.0 && s.is_finite())
            .map(|s| s.log2())
            .filter(|e| *e >= lo && *e <= hi)
            .collect();
        let mut levels = Vec::new();
        let mut best = (f64::NEG_INFINITY, f64::NAN);
        let mut growths = 0;
        for level in 0..=self.max_doublings {
            let mut exps = self.exponents(level);
            if level == 0 {
                exps.extend(&seeds);
            }
            let todo: Vec<f64> = exps
                .into_iter()
                .filter(|e| !cache.contains_key(&e.to_bits()))
                .collect();
            let values: Vec<Result<f64>> = todo.par_iter().map(|&e| eval(2f64.powf(e))).collect();
            for (e, v) in todo.iter().zip(values) {
                let v = v?;
                if v.is_nan() {
                    return Err(Error::NonConvergence { value: v, error: f64::INFINITY });
                }
                cache.insert(e.to_bits(), v);
            }
            // deterministic order for ties: ascending exponent
            let mut entries: Vec<(f64, f64)> = cache.iter().map(|(k, v)| (f64::from_bits(*k), *v)).collect();
            entries.sort_by(|a, b| a.0.total_cmp(&b.0));
            let prev = best.0;
            for (e, v) in entries {
                if v > best.0 {
                    best = (v, 2f64.powf(e));
                }
            }
            levels.push(best.0);
            if best.0.is_infinite() {
                return Ok(SupResult {
                    value: best.0,
                    witness: best.1,
                    verdict: Verdict::Fails,
                    levels,
                });
            }
            if level == 0 {
                continue;
            }
            if best.0 <= prev * (1.0 + self.stability) {
                return Ok(SupResult {
                    value: best.0,
                    witness: best.1,
                    verdict: Verdict::Holds,
                    levels,
                });
            }
            growths += 1;
            if growths >= self.growths_to_fail {
                return Ok(SupResult {
                    value: best.0,
                    witness: best.1,
                    verdict: Verdict::Fails,
                    levels,
                });
            }
        }
        Ok(SupResult {
            value: best.0,
            witness: best.1,
            verdict: Verdict::Inconclusive,
            levels,
        })
    }
}
