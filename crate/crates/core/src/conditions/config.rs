use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension and the exponent pair `(p, q)` with their conjugates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentConfig {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub p_conj: f64,
    pub q_conj: f64,
}

/// `p' = p / (p - 1)`, with `1' = inf` and `inf' = 1`.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `1 / p`, zero at infinity.
pub(crate) fn recip(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

impl ExponentConfig {
    pub fn new(n: usize, p: f64, q: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for (name, x) in [("p", p), ("q", q)] {
            if !(x >= 1.0) {
                return Err(Error::InvalidInput(format!("need 1 <= {name} <= inf, got {x}")));
            }
        }
        Ok(ExponentConfig {
            n,
            p,
            q,
            p_conj: conjugate(p),
            q_conj: conjugate(q),
        })
    }

    /// `1 < p <= q < inf`, the range of the rearrangement criterion.
    pub fn rearrangement_gate(&self) -> bool {
        self.p > 1.0 && self.p <= self.q && self.q.is_finite()
    }

    /// `1 < p, q < inf`, the range of the necessary conditions; `q >= p` is
    /// not needed there.
    pub fn necessary_gate(&self) -> bool {
        self.p > 1.0 && self.p.is_finite() && self.q > 1.0 && self.q.is_finite()
    }

    /// `n - 1 - q n / p'`, the power multiplying `u0` in the moment condition.
    pub fn moment_exponent(&self) -> f64 {
        self.n as f64 - 1.0 - self.q * self.n as f64 * recip(self.p_conj)
    }

    /// `1 - p'`, the power of `v` in the dual integrals.
    pub fn dual_power(&self) -> f64 {
        1.0 - self.p_conj
    }
}

/// Which restriction-theory exponent ranges contain `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentRanges {
    pub tomas_stein: bool,
    pub tao: bool,
    pub conjecture: bool,
    pub q_gate: bool,
    pub tomas_stein_bound: f64,
    pub tao_bound: f64,
    pub conjecture_bound: f64,
    #[serde(with = "super::real")]
    pub q_bound: f64,
}

/// `p <= 2(n+1)/(n+3)`, `p < 2(n+2)/(n+4)`, `p < 2n/(n+1)` and
/// `q <= (n-1)/(n+1) p'`, all with `p >= 1`.
pub fn exponent_ranges(cfg: &ExponentConfig) -> ExponentRanges {
    let n = cfg.n as f64;
    let ts = 2.0 * (n + 1.0) / (n + 3.0);
    let tao = 2.0 * (n + 2.0) / (n + 4.0);
    let conj = 2.0 * n / (n + 1.0);
    let qb = (n - 1.0) / (n + 1.0) * cfg.p_conj;
    let p = cfg.p;
    ExponentRanges {
        tomas_stein: p >= 1.0 && p <= ts,
        tao: p >= 1.0 && p < tao,
        conjecture: p >= 1.0 && p < conj,
        q_gate: cfg.q >= 1.0 && cfg.q <= qb,
        tomas_stein_bound: ts,
        tao_bound: tao,
        conjecture_bound: conj,
        q_bound: qb,
    }
}

/// A yes/no answer with the clauses that failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub failed: Vec<String>,
}

impl Admissibility {
    fn from_clauses(clauses: &[(&str, bool)]) -> Self {
        let failed: Vec<String> = clauses.iter().filter(|c| !c.1).map(|c| c.0.to_string()).collect();
        Admissibility {
            admissible: failed.is_empty(),
            failed,
        }
    }
}

const RELATION_TOL: f64 = 1e-12;

pub const CLAUSE_RELATION: &str = "a/p + b/q = n(1 - 1/p - 1/q)";
pub const CLAUSE_B: &str = "-n < b <= 0";
pub const CLAUSE_A: &str = "0 <= a < n(p-1)";

/// Pitt's inequality with `u = |x|^b`, `v = |x|^a` holds iff all three clauses do.
pub fn power_weight_admissible(a: f64, b: f64, cfg: &ExponentConfig) -> Admissibility {
    let n = cfg.n as f64;
    let (ip, iq) = (recip(cfg.p), recip(cfg.q));
    let relation = (a * ip + b * iq - n * (1.0 - ip - iq)).abs() <= RELATION_TOL * (1.0 + a.abs() + b.abs());
    Admissibility::from_clauses(&[
        (CLAUSE_RELATION, relation),
        (CLAUSE_B, -n < b && b <= 0.0),
        (CLAUSE_A, 0.0 <= a && a < n * (cfg.p - 1.0)),
    ])
}

pub const CLAUSE_SUBSPACE_RELATION: &str = "b/p + a/q = n(1 - 1/p - 1/q)";
pub const CLAUSE_SUBSPACE_LOWER: &str = "(n-1)(1/2 - 1/p) + max(1/p' - 1/q, 0) <= b/p";
pub const CLAUSE_SUBSPACE_UPPER: &str = "b/p < n/p' + k";

/// The range for `f` a radial function times a spherical harmonic of degree
/// `k`, with `u = |x|^a` on the Fourier side and `v = |x|^b` on `f`.
pub fn subspace_admissible(a: f64, b: f64, cfg: &ExponentConfig, k: u32) -> Admissibility {
    let n = cfg.n as f64;
    let (ip, iq) = (recip(cfg.p), recip(cfg.q));
    let relation = (b * ip + a * iq - n * (1.0 - ip - iq)).abs() <= RELATION_TOL * (1.0 + a.abs() + b.abs());
    let lower = (n - 1.0) * (0.5 - ip) + (recip(cfg.p_conj) - iq).max(0.0);
    let bp = b * ip;
    Admissibility::from_clauses(&[
        (CLAUSE_SUBSPACE_RELATION, relation),
        (CLAUSE_SUBSPACE_LOWER, lower <= bp),
        (CLAUSE_SUBSPACE_UPPER, bp < n * recip(cfg.p_conj) + k as f64),
    ])
}

/// The piecewise-power restriction range: `1 < p <= 2`, `n >= 2`,
/// `2 <= q <= (n-1)/(n+1) p'`, `alpha < n(p-1)`, `beta >= 0`; at `p = q = 2`
/// also `alpha < n`, `beta > 1`.
pub fn piecewise_restriction_admissible(alpha: f64, beta: f64, cfg: &ExponentConfig) -> Admissibility {
    let n = cfg.n as f64;
    let (p, q) = (cfg.p, cfg.q);
    if p == 2.0 && q == 2.0 && cfg.n >= 2 && alpha < n && beta > 1.0 {
        return Admissibility::from_clauses(&[]);
    }
    Admissibility::from_clauses(&[
        ("n >= 2", cfg.n >= 2),
        ("1 < p <= 2", p > 1.0 && p <= 2.0),
        ("2 <= q <= (n-1)/(n+1) p'", q >= 2.0 && q <= (n - 1.0) / (n + 1.0) * cfg.p_conj),
        ("alpha < n(p-1)", alpha < n * (p - 1.0)),
        ("beta >= 0", beta >= 0.0),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, p: f64, q: f64) -> ExponentConfig {
        ExponentConfig::new(n, p, q).unwrap()
    }

    #[test]
    fn conjugates() {
        let c = cfg(2, 1.25, 1.5);
        assert!((c.p_conj - 5.0).abs() < 1e-14);
        assert!((c.q_conj - 3.0).abs() < 1e-14);
        assert_eq!(conjugate(1.0), f64::INFINITY);
        assert!(ExponentConfig::new(2, 0.5, 2.0).is_err());
        assert!((c.moment_exponent() - 0.4).abs() < 1e-14);
    }

    #[test]
    fn ranges() {
        let r = exponent_ranges(&cfg(2, 1.3, 1.0));
        assert!((r.tao_bound - r.conjecture_bound).abs() < 1e-15);
        assert!(exponent_ranges(&cfg(3, 1.2, 1.0)).tomas_stein);
        assert!(!exponent_ranges(&cfg(3, 1.45, 1.0)).tao);
    }

    #[test]
    fn power_box() {
        assert!(power_weight_admissible(0.0, 0.0, &cfg(3, 2.0, 2.0)).admissible);
        assert!(power_weight_admissible(0.5, -0.5, &cfg(1, 2.0, 2.0)).admissible);
        let r = power_weight_admissible(-0.5, 0.5, &cfg(1, 2.0, 2.0));
        assert!(r.failed.contains(&CLAUSE_B.to_string()));
    }

    #[test]
    fn subspace_is_wider() {
        // v = |x|^-0.3, u = |xi|^-1.2 on the relation at n = 3, p = q = 1.5:
        // v has a negative exponent, which only the subspace range allows
        let c = cfg(3, 1.5, 1.5);
        assert!(!power_weight_admissible(-0.3, -1.2, &c).admissible);
        assert!(subspace_admissible(-1.2, -0.3, &c, 0).admissible);
        assert!(!subspace_admissible(-1.4, -0.2, &c, 0).admissible);
        let c = cfg(3, 2.0, 2.0);
        assert!(!subspace_admissible(-3.0, 3.0, &c, 0).admissible);
        assert!(subspace_admissible(-3.0, 3.0, &c, 1).admissible);
    }
}
