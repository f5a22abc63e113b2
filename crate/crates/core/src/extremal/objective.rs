use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::ExponentConfig;
use crate::error::{Error, Result};
use crate::numerics::{weighted_lp_norm, sphere_measure, GridScheme, RadialGrid};
use crate::transforms::{transform_value, Decay, RadialProfile, TestFunctionFamily};
use crate::weights::Weight;

/// Which ratio is maximized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inequality {
    /// `|| u^(1/q) f^ ||_q / || v^(1/p) f ||_p`.
    Pitt,
    /// `|| f^ ||_{L^q(S, u dsigma)} / || v^(1/p) f ||_p` on the unit sphere.
    Restriction,
    /// `|| f ||_2^2 / (|| u^(-1/q) |xi| f^ ||_{q'} || v^(1/p) |x| f ||_p)`.
    Uncertainty,
}

/// A scale-invariant ratio whose supremum over `f` is the best constant.
#[derive(Debug, Clone)]
pub struct RatioObjective {
    pub inequality: Inequality,
    /// Weight on the Fourier side.
    pub u: Weight,
    /// Weight on `f`.
    pub v: Weight,
    pub cfg: ExponentConfig,
}

/// Both sides of an inequality and their ratio for one function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub parameter: f64,
    #[serde(with = "crate::conditions::real")]
    pub lhs: f64,
    #[serde(with = "crate::conditions::real")]
    pub rhs: f64,
    #[serde(with = "crate::conditions::real")]
    pub ratio: f64,
}

impl RatioRow {
    pub(crate) fn new(parameter: f64, lhs: f64, rhs: f64) -> Self {
        RatioRow { parameter, lhs, rhs, ratio: lhs / rhs }
    }
}

impl RatioObjective {
    pub fn new(inequality: Inequality, u: Weight, v: Weight, cfg: ExponentConfig) -> Result<Self> {
        if !u.is_radial() || !v.is_radial() {
            return Err(Error::Unsupported("extremal objectives need radial weights".into()));
        }
        if inequality == Inequality::Uncertainty && !(cfg.q > 1.0) {
            return Err(Error::InvalidInput("the uncertainty ratio needs q > 1".into()));
        }
        Ok(RatioObjective { inequality, u, v, cfg })
    }

    pub fn pitt(u: Weight, v: Weight, cfg: ExponentConfig) -> Result<Self> {
        Self::new(Inequality::Pitt, u, v, cfg)
    }

    /// Both sides for one profile, by adaptive quadrature.
    pub fn evaluate(&self, f: &RadialProfile) -> Result<RatioRow> {
        let (n, p, q) = (self.cfg.n, self.cfg.p, self.cfg.q);
        let hat = transform_profile(f, n)?;
        let (lhs, rhs) = match self.inequality {
            Inequality::Pitt => (
                weighted_lp_norm(&hat, &self.u, q, n)?,
                weighted_lp_norm(f, &self.v, p, n)?,
            ),
            Inequality::Restriction => (
                restriction_norm(transform_value(f, n, 1.0)?, &self.u, q, n),
                weighted_lp_norm(f, &self.v, p, n)?,
            ),
            Inequality::Uncertainty => {
                let num = weighted_lp_norm(f, &Weight::constant(), 2.0, n)?.powi(2);
                let fq = self.u.powf(-self.cfg.q_conj / q);
                let a = weighted_lp_norm(&times_radius(&hat), &fq, self.cfg.q_conj, n)?;
                let b = weighted_lp_norm(&times_radius(f), &self.v, p, n)?;
                (num, a * b)
            }
        };
        Ok(RatioRow::new(0.0, lhs, rhs))
    }
}

fn restriction_norm(value: f64, u: &Weight, q: f64, n: usize) -> f64 {
    value.abs() * (u.radial(1.0) * sphere_measure(n)).powf(1.0 / q)
}

/// `rho -> f^(rho)` as a profile of its own.
pub(crate) fn transform_profile(f: &RadialProfile, n: usize) -> Result<RadialProfile> {
    let decay = match f.decay() {
        Decay::Gaussian { scale } => Decay::Gaussian { scale: 1.0 / scale },
        _ => Decay::Polynomial { exponent: -0.5 * (n as f64 + 1.0) },
    };
    let g = f.clone();
    RadialProfile::from_fn(format!("transform of {}", f.label()), decay, vec![], move |rho| {
        transform_value(&g, n, rho).unwrap_or(f64::NAN)
    })
}

fn times_radius(f: &RadialProfile) -> RadialProfile {
    let g = f.evaluator();
    let decay = match f.decay() {
        Decay::Polynomial { exponent } => Decay::Polynomial { exponent: exponent + 1.0 },
        d => d,
    };
    RadialProfile::from_fn(format!("|x| {}", f.label()), decay, f.breaks().to_vec(), move |r| r * g(r))
        .expect("a decay class survives multiplication by r")
}

/// Slope of `log ratio` against `log lambda` for `f(lambda x)` with power
/// weights `u = |xi|^b`, `v = |x|^a`. Zero exactly on the relation
/// `a/p + b/q = n(1 - 1/p - 1/q)`.
pub fn dilation_exponent(a: f64, b: f64, cfg: &ExponentConfig) -> f64 {
    let n = cfg.n as f64;
    a / cfg.p + b / cfg.q - n * (1.0 - 1.0 / cfg.p - 1.0 / cfg.q)
}

/// Ratio of the objective on `f(lambda x)` for each `lambda`.
pub fn dilation_sweep(obj: &RatioObjective, base: &RadialProfile, lambdas: &[f64]) -> Result<Vec<RatioRow>> {
    if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidInput(format!("dilations must be positive, got {l}")));
    }
    lambdas
        .par_iter()
        .map(|&l| {
            let row = obj.evaluate(&base.dilate(l))?;
            Ok(RatioRow { parameter: l, ..row })
        })
        .collect()
}

/// A family sampled on fixed spatial and frequency grids, so that linear
/// combinations can be scored without new transforms.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub space: RadialGrid,
    pub frequency: RadialGrid,
    /// Member values at the spatial nodes.
    pub values: Vec<Vec<f64>>,
    /// Member transforms at the frequency nodes.
    pub transforms: Vec<Vec<f64>>,
    /// Member transforms at `rho = 1`.
    pub at_unit: Vec<f64>,
}

const GRADING: f64 = 1.25;
const ORDER: usize = 10;

/// Geometric panels from `lo` to `hi`, none wider than `h_max`.
fn graded_grid(lo: f64, hi: f64, h_max: f64, extra: &[f64]) -> Result<RadialGrid> {
    let mut b = vec![0.0];
    let mut r = lo;
    while r < hi {
        b.push(r);
        r *= GRADING;
    }
    b.push(hi);
    b.extend(extra.iter().copied().filter(|x| *x > 0.0 && *x < hi));
    b.sort_by(f64::total_cmp);
    b.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * y.abs().max(1e-300));
    let mut out = vec![0.0];
    for w in b.windows(2) {
        let k = ((w[1] - w[0]) / h_max).ceil().max(1.0) as usize;
        for j in 1..=k {
            out.push(w[0] + (w[1] - w[0]) * j as f64 / k as f64);
        }
    }
    RadialGrid::from_breaks(out, ORDER, GridScheme::CompositeGauss)
}

/// Frequency reach and feature size of one member.
fn scales(f: &RadialProfile) -> Result<(f64, f64, bool)> {
    match f.decay() {
        Decay::Gaussian { scale } => Ok((12.0 / scale, scale, false)),
        Decay::Compact { radius } => Ok((64.0 / radius, radius, true)),
        Decay::Exponential { rate } => Ok((200.0 * rate, 1.0 / rate, true)),
        Decay::Polynomial { .. } => Err(Error::Unsupported(format!(
            "member '{}' has no truncation radius",
            f.label()
        ))),
    }
}

impl Discretization {
    /// Grids graded from `1e-7` of the smallest member scale up to the
    /// largest truncation radius and frequency reach. Transforms beyond the
    /// reach are dropped, which can only lower a Pitt ratio.
    pub fn for_family(family: &TestFunctionFamily, obj: &RatioObjective) -> Result<Self> {
        let n = obj.cfg.n;
        let members: Vec<&RadialProfile> = family.members().collect();
        let mut reach = 0.0f64;
        let mut smallest = f64::INFINITY;
        let mut extent = 0.0f64;
        let mut oscillating = false;
        let mut breaks = Vec::new();
        for f in &members {
            let (p, s, osc) = scales(f)?;
            reach = reach.max(p);
            smallest = smallest.min(s).min(1.0 / p);
            extent = extent.max(f.truncation_radius().unwrap_or(0.0));
            oscillating |= osc;
            breaks.extend_from_slice(f.breaks());
        }
        breaks.extend(obj.v.breakpoints(extent));
        let space = graded_grid(1e-7 * smallest, extent, f64::INFINITY, &breaks)?;
        // a compact member oscillates on the Fourier side with period 2 pi / R
        let h = if oscillating { 2.0 * std::f64::consts::PI / extent } else { f64::INFINITY };
        let frequency = graded_grid(1e-7 / extent, reach, h, &obj.u.breakpoints(reach))?;
        let values = members
            .iter()
            .map(|f| space.nodes.iter().map(|&r| f.eval(r)).collect())
            .collect();
        let transforms = members
            .iter()
            .map(|f| {
                frequency
                    .nodes
                    .par_iter()
                    .map(|&rho| transform_value(f, n, rho))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let at_unit = members
            .iter()
            .map(|f| transform_value(f, n, 1.0))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Discretization {
            space,
            frequency,
            values,
            transforms,
            at_unit,
        })
    }

    pub fn members(&self) -> usize {
        self.values.len()
    }

    /// `sum_k c_k f_k` at the spatial nodes.
    pub fn combine(&self, c: &[f64]) -> Vec<f64> {
        combine(&self.values, c)
    }
}

fn combine(rows: &[Vec<f64>], c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; rows[0].len()];
    for (row, &ck) in rows.iter().zip(c) {
        if ck != 0.0 {
            for (o, x) in out.iter_mut().zip(row) {
                *o += ck * x;
            }
        }
    }
    out
}

/// The objective restricted to a [`Discretization`], with the node factors
/// precomputed.
pub(crate) struct DiscreteObjective<'a> {
    obj: &'a RatioObjective,
    disc: &'a Discretization,
    space_factor: Vec<f64>,
    space_factor_x: Vec<f64>,
    freq_factor: Vec<f64>,
}

impl<'a> DiscreteObjective<'a> {
    pub fn new(obj: &'a RatioObjective, disc: &'a Discretization) -> Self {
        let n = obj.cfg.n;
        let omega = sphere_measure(n);
        let nm1 = n as i32 - 1;
        let factor = |g: &RadialGrid, w: &dyn Fn(f64) -> f64| -> Vec<f64> {
            g.nodes
                .iter()
                .zip(&g.weights)
                .map(|(&r, &wt)| omega * wt * w(r) * r.powi(nm1))
                .collect()
        };
        let (space_factor, space_factor_x, freq_factor) = match obj.inequality {
            Inequality::Uncertainty => {
                let e = -obj.cfg.q_conj / obj.cfg.q;
                (
                    factor(&disc.space, &|_| 1.0),
                    factor(&disc.space, &|r| obj.v.radial(r) * r.powf(obj.cfg.p)),
                    factor(&disc.frequency, &|rho| obj.u.radial(rho).powf(e) * rho.powf(obj.cfg.q_conj)),
                )
            }
            _ => (
                factor(&disc.space, &|r| obj.v.radial(r)),
                vec![],
                factor(&disc.frequency, &|rho| obj.u.radial(rho)),
            ),
        };
        DiscreteObjective {
            obj,
            disc,
            space_factor,
            space_factor_x,
            freq_factor,
        }
    }

    fn norm(values: &[f64], factor: &[f64], p: f64) -> f64 {
        values
            .iter()
            .zip(factor)
            .map(|(x, w)| if *x == 0.0 { 0.0 } else { w * x.abs().powf(p) })
            .sum::<f64>()
            .powf(1.0 / p)
    }

    /// `(lhs, rhs)` for the combination with coefficients `c`.
    pub fn sides(&self, c: &[f64]) -> (f64, f64) {
        let cfg = &self.obj.cfg;
        let f = self.disc.combine(c);
        match self.obj.inequality {
            Inequality::Pitt => {
                let hat = combine(&self.disc.transforms, c);
                (
                    Self::norm(&hat, &self.freq_factor, cfg.q),
                    Self::norm(&f, &self.space_factor, cfg.p),
                )
            }
            Inequality::Restriction => {
                let at: f64 = self.disc.at_unit.iter().zip(c).map(|(a, b)| a * b).sum();
                (
                    restriction_norm(at, &self.obj.u, cfg.q, cfg.n),
                    Self::norm(&f, &self.space_factor, cfg.p),
                )
            }
            Inequality::Uncertainty => {
                let hat = combine(&self.disc.transforms, c);
                let num = Self::norm(&f, &self.space_factor, 2.0).powi(2);
                let a = Self::norm(&hat, &self.freq_factor, cfg.q_conj);
                let b = Self::norm(&f, &self.space_factor_x, cfg.p);
                (num, a * b)
            }
        }
    }

    /// The ratio, or `None` when the right side is zero or infinite.
    pub fn ratio(&self, c: &[f64]) -> Option<f64> {
        let (l, r) = self.sides(c);
        let q = l / r;
        (r > 0.0 && r.is_finite() && q.is_finite()).then_some(q)
    }
}
