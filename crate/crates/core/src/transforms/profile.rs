use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bessel::BesselOrder;
use crate::error::{Error, Result};
use crate::numerics::{ball_volume, Tail};

pub type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Closed-form transform `(n, rho) -> f^(rho)`.
pub type TransformFn = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// How a radial profile behaves as `r -> inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Decay {
    /// Zero for `r > radius`.
    Compact { radius: f64 },
    /// Bounded by a polynomial times `exp(-r^2 / (2 scale^2))`.
    Gaussian { scale: f64 },
    /// Bounded by a polynomial times `exp(-rate r)`.
    Exponential { rate: f64 },
    /// Like `r^exponent`.
    Polynomial { exponent: f64 },
}

impl Decay {
    /// Radius beyond which the profile is negligible (below about `1e-30` of
    /// its scale), or `None` for polynomial decay.
    pub fn truncation_radius(&self) -> Option<f64> {
        match *self {
            Decay::Compact { radius } => Some(radius),
            Decay::Gaussian { scale } => Some(12.0 * scale),
            Decay::Exponential { rate } => Some(80.0 / rate),
            Decay::Polynomial { .. } => None,
        }
    }

    fn dilate(self, lambda: f64) -> Decay {
        match self {
            Decay::Compact { radius } => Decay::Compact { radius: radius / lambda },
            Decay::Gaussian { scale } => Decay::Gaussian { scale: scale / lambda },
            Decay::Exponential { rate } => Decay::Exponential { rate: rate * lambda },
            p => p,
        }
    }
}

/// A radial function `f(x) = f0(|x|)` on `R^n`, described by its profile
/// `f0` on `[0, inf)`.
#[derive(Clone)]
pub struct RadialProfile {
    label: String,
    f: ProfileFn,
    decay: Decay,
    breaks: Vec<f64>,
    transform: Option<TransformFn>,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("label", &self.label)
            .field("decay", &self.decay)
            .field("breaks", &self.breaks)
            .finish()
    }
}

impl RadialProfile {
    /// A profile from a closure. Non-smooth points go in `breaks`; the decay
    /// class is spot-checked at one and a half times the truncation radius.
    pub fn from_fn(
        label: impl Into<String>,
        decay: Decay,
        breaks: Vec<f64>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let p = Self::new_unchecked(label.into(), decay, breaks, Arc::new(f));
        p.check_decay()?;
        Ok(p)
    }

    pub(crate) fn new_unchecked(label: String, decay: Decay, breaks: Vec<f64>, f: ProfileFn) -> Self {
        let mut breaks: Vec<f64> = breaks.into_iter().filter(|b| *b > 0.0 && b.is_finite()).collect();
        if let Decay::Compact { radius } = decay {
            breaks.push(radius);
            breaks.retain(|b| *b <= radius);
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        RadialProfile {
            label,
            f,
            decay,
            breaks,
            transform: None,
        }
    }

    /// Attach a closed-form transform `(n, rho) -> f^(rho)`.
    pub fn with_transform(mut self, t: impl Fn(usize, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.transform = Some(Arc::new(t));
        self
    }

    /// `exp(-r^2 / 2)`, whose transform is `(2 pi)^(n/2) exp(-rho^2 / 2)`.
    pub fn gaussian() -> Self {
        Self::new_unchecked(
            "gaussian".into(),
            Decay::Gaussian { scale: 1.0 },
            vec![],
            Arc::new(|r: f64| (-0.5 * r * r).exp()),
        )
        .with_transform(|n, rho| (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0) * (-0.5 * rho * rho).exp())
    }

    /// Indicator of `[0, radius]`, i.e. of the ball of that radius. Its
    /// transform is `|B_s| j_{n/2}(s rho)`.
    pub fn indicator(radius: f64) -> Self {
        assert!(radius > 0.0, "radius must be positive");
        Self::new_unchecked(
            format!("indicator(r<={radius})"),
            Decay::Compact { radius },
            vec![],
            Arc::new(move |r: f64| if r <= radius { 1.0 } else { 0.0 }),
        )
        .with_transform(move |n, rho| {
            ball_volume(n) * radius.powi(n as i32) * BesselOrder::for_dimension(n + 2).normalized(radius * rho)
        })
    }

    /// The constant `c`, treated as a profile of polynomial decay with
    /// exponent zero.
    pub fn constant(c: f64) -> Self {
        Self::new_unchecked(
            format!("constant({c})"),
            Decay::Polynomial { exponent: 0.0 },
            vec![],
            Arc::new(move |_| c),
        )
    }

    /// `exp(-rate r)`.
    pub fn exponential(rate: f64) -> Self {
        assert!(rate > 0.0, "rate must be positive");
        Self::new_unchecked(
            format!("exp(-{rate} r)"),
            Decay::Exponential { rate },
            vec![],
            Arc::new(move |r: f64| (-rate * r).exp()),
        )
    }

    /// `(1 - r / radius)_+`.
    pub fn hat(radius: f64) -> Self {
        assert!(radius > 0.0, "radius must be positive");
        Self::new_unchecked(
            format!("hat({radius})"),
            Decay::Compact { radius },
            vec![],
            Arc::new(move |r: f64| (1.0 - r / radius).max(0.0)),
        )
    }

    /// Piecewise linear interpolant of `(nodes, values)`, zero beyond the
    /// last node.
    pub fn tabulated(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() || nodes.len() < 2 || nodes[0] != 0.0 {
            return Err(Error::InvalidInput(
                "tabulated profile needs matching rows starting at r = 0".into(),
            ));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "tabulated profile radii must increase and values be finite".into(),
            ));
        }
        let radius = *nodes.last().unwrap();
        let breaks = nodes.clone();
        let f = move |r: f64| {
            if r > radius {
                return 0.0;
            }
            let i = nodes.partition_point(|&x| x <= r).clamp(1, nodes.len() - 1) - 1;
            let t = (r - nodes[i]) / (nodes[i + 1] - nodes[i]);
            values[i] * (1.0 - t) + values[i + 1] * t
        };
        Ok(Self::new_unchecked(
            "tabulated".into(),
            Decay::Compact { radius },
            breaks,
            Arc::new(f),
        ))
    }

    /// `r -> f0(lambda r)`; the transform becomes `lambda^(-n) f^(rho / lambda)`.
    pub fn dilate(&self, lambda: f64) -> Self {
        assert!(lambda > 0.0, "dilation must be positive");
        let f = self.f.clone();
        let mut p = Self::new_unchecked(
            format!("{}(x{lambda})", self.label),
            self.decay.dilate(lambda),
            self.breaks.iter().map(|b| b / lambda).collect(),
            Arc::new(move |r: f64| f(lambda * r)),
        );
        if let Some(t) = self.transform.clone() {
            p.transform = Some(Arc::new(move |n, rho| lambda.powi(-(n as i32)) * t(n, rho / lambda)));
        }
        p
    }

    /// `c f0`.
    pub fn scale(&self, c: f64) -> Self {
        let f = self.f.clone();
        let mut p = self.clone();
        p.label = format!("{c}*{}", self.label);
        p.f = Arc::new(move |r: f64| c * f(r));
        if let Some(t) = self.transform.clone() {
            p.transform = Some(Arc::new(move |n, rho| c * t(n, rho)));
        }
        p
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r.abs())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn decay(&self) -> Decay {
        self.decay
    }

    /// Interior points where the profile may be non-smooth.
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn truncation_radius(&self) -> Option<f64> {
        self.decay.truncation_radius()
    }

    /// Breakpoints plus the truncation radius, and the tail treatment for
    /// non-oscillatory integrands built from this profile.
    pub fn integration_plan(&self) -> (Vec<f64>, Tail) {
        let mut b = self.breaks.clone();
        match self.truncation_radius() {
            Some(r) => {
                b.push(r);
                (b, Tail::None)
            }
            None => {
                b.push(1.0);
                (b, Tail::Algebraic)
            }
        }
    }

    pub fn known_transform(&self, n: usize, rho: f64) -> Option<f64> {
        self.transform.as_ref().map(|t| t(n, rho))
    }

    pub fn has_known_transform(&self) -> bool {
        self.transform.is_some()
    }

    pub fn evaluator(&self) -> ProfileFn {
        self.f.clone()
    }

    /// Verify the decay metadata at `3R/2`.
    pub fn check_decay(&self) -> Result<()> {
        let Some(r) = self.truncation_radius() else {
            return Ok(());
        };
        let probe = self.eval(1.5 * r).abs();
        let scale = [0.0, 0.25 * r, 0.5 * r]
            .iter()
            .map(|&x| self.eval(x).abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let ok = match self.decay {
            Decay::Compact { .. } => probe == 0.0,
            _ => probe <= 1e-20 * scale,
        };
        if ok && probe.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "profile '{}' is not negligible at 3R/2 = {} (value {probe:e})",
                self.label,
                1.5 * r
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_spot_check() {
        assert!(RadialProfile::from_fn("bad", Decay::Compact { radius: 1.0 }, vec![], |_| 1.0).is_err());
        assert!(RadialProfile::from_fn("ok", Decay::Gaussian { scale: 2.0 }, vec![], |r| (-r * r / 8.0).exp()).is_ok());
        assert!(RadialProfile::gaussian().check_decay().is_ok());
        assert!(RadialProfile::indicator(2.0).check_decay().is_ok());
    }

    #[test]
    fn dilation_moves_breaks_and_transform() {
        let p = RadialProfile::indicator(2.0).dilate(4.0);
        assert_eq!(p.breaks(), &[0.5]);
        assert_eq!(p.eval(0.49), 1.0);
        assert_eq!(p.eval(0.51), 0.0);
        let t0 = p.known_transform(3, 0.0).unwrap();
        assert!((t0 - 4.0 / 3.0 * std::f64::consts::PI * 0.125).abs() < 1e-14);
    }

    #[test]
    fn tabulated_profile() {
        let p = RadialProfile::tabulated(vec![0.0, 1.0, 2.0], vec![1.0, 3.0, 1.0]).unwrap();
        assert_eq!(p.eval(0.5), 2.0);
        assert_eq!(p.eval(1.5), 2.0);
        assert_eq!(p.eval(2.5), 0.0);
    }
}
