use std::sync::Arc;

use super::{Decay, RadialProfile};
use crate::error::{Error, Result};

/// A finite family of radial test functions built from one base profile.
#[derive(Debug, Clone)]
pub struct TestFunctionFamily {
    base: RadialProfile,
    members: Vec<(f64, RadialProfile)>,
}

impl TestFunctionFamily {
    /// `f0(lambda r)` for each `lambda > 0`.
    pub fn dilations(base: &RadialProfile, lambdas: &[f64]) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidInput("family needs at least one dilation".into()));
        }
        if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
            return Err(Error::InvalidInput(format!("dilations must be positive, got {l}")));
        }
        Ok(TestFunctionFamily {
            base: base.clone(),
            members: lambdas.iter().map(|&l| (l, base.dilate(l))).collect(),
        })
    }

    /// Dyadic dilations `2^k`, `k = lo..=hi`.
    pub fn dyadic(base: &RadialProfile, lo: i32, hi: i32) -> Result<Self> {
        let lambdas: Vec<f64> = (lo..=hi).map(|k| 2f64.powi(k)).collect();
        Self::dilations(base, &lambdas)
    }

    /// `f0(r) cos(w r)` for each frequency `w`.
    pub fn modulations(base: &RadialProfile, freqs: &[f64]) -> Result<Self> {
        if freqs.is_empty() {
            return Err(Error::InvalidInput("family needs at least one frequency".into()));
        }
        let members = freqs
            .iter()
            .map(|&w| {
                let f = base.evaluator();
                let p = RadialProfile::new_unchecked(
                    format!("{}*cos({w} r)", base.label()),
                    base.decay(),
                    base.breaks().to_vec(),
                    Arc::new(move |r: f64| f(r) * (w * r).cos()),
                );
                (w, p)
            })
            .collect();
        Ok(TestFunctionFamily {
            base: base.clone(),
            members,
        })
    }

    /// Smooth bumps `exp(1 - 1 / (1 - ((r - c) / width)^2))` centred on
    /// spherical shells of radius `c`.
    pub fn shell_bumps(centers: &[f64], width: f64) -> Result<Self> {
        if !(width > 0.0) || centers.is_empty() {
            return Err(Error::InvalidInput("shell bumps need a positive width and centres".into()));
        }
        let members: Vec<(f64, RadialProfile)> = centers
            .iter()
            .map(|&c| (c, shell_bump(c, width)))
            .collect();
        Ok(TestFunctionFamily {
            base: members[0].1.clone(),
            members,
        })
    }

    pub fn base(&self) -> &RadialProfile {
        &self.base
    }

    /// Parameter value of each member (dilation, frequency or centre).
    pub fn parameters(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.0).collect()
    }

    pub fn members(&self) -> impl Iterator<Item = &RadialProfile> {
        self.members.iter().map(|m| &m.1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &RadialProfile)> {
        self.members.iter().map(|m| (m.0, &m.1))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn shell_bump(c: f64, width: f64) -> RadialProfile {
    let f = move |r: f64| {
        let s = (r - c) / width;
        if s.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - s * s)).exp()
        }
    };
    RadialProfile::new_unchecked(
        format!("bump({c}, {width})"),
        Decay::Compact { radius: c + width },
        vec![(c - width).max(0.0), c],
        Arc::new(f),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dilations_are_checked() {
        let g = RadialProfile::gaussian();
        assert!(TestFunctionFamily::dilations(&g, &[1.0, -2.0]).is_err());
        let fam = TestFunctionFamily::dyadic(&g, -2, 3).unwrap();
        assert_eq!(fam.len(), 6);
        assert_eq!(fam.parameters()[0], 0.25);
        let m: Vec<_> = fam.members().collect();
        assert_eq!(m[3].eval(1.0), g.eval(2.0));
    }

    #[test]
    fn bumps_are_supported_on_shells() {
        let fam = TestFunctionFamily::shell_bumps(&[2.0, 5.0], 0.5).unwrap();
        let m: Vec<_> = fam.members().collect();
        assert_eq!(m[0].eval(2.0), 1.0);
        assert_eq!(m[0].eval(2.6), 0.0);
        assert_eq!(m[1].eval(4.4), 0.0);
        assert!(m[1].check_decay().is_ok());
    }
}
