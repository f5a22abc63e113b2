use serde::{Deserialize, Serialize};

use super::gauss::{clenshaw_curtis, gauss_legendre};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridScheme {
    CompositeGauss,
    ClenshawCurtis,
}

/// Quadrature nodes on `[0, r_max]` assembled from panels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Panel boundaries, starting at 0 and ending at `r_max`.
    pub breaks: Vec<f64>,
    pub r_max: f64,
    pub scheme: GridScheme,
}

impl RadialGrid {
    /// `panels` equal panels with an `order`-point Gauss rule on each.
    pub fn composite_gauss(r_max: f64, panels: usize, order: usize) -> Result<Self> {
        let breaks = uniform_breaks(r_max, panels)?;
        Self::from_breaks(breaks, order, GridScheme::CompositeGauss)
    }

    /// Composite Clenshaw–Curtis with `order + 1` points per panel; shared
    /// panel endpoints are merged.
    pub fn clenshaw_curtis(r_max: f64, panels: usize, order: usize) -> Result<Self> {
        let breaks = uniform_breaks(r_max, panels)?;
        Self::from_breaks(breaks, order, GridScheme::ClenshawCurtis)
    }

    /// Panels with the given boundaries, which must start at 0 and increase.
    pub fn from_breaks(breaks: Vec<f64>, order: usize, scheme: GridScheme) -> Result<Self> {
        if breaks.len() < 2 || breaks[0] != 0.0 || breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "grid breaks must start at 0 and increase strictly".into(),
            ));
        }
        let r_max = *breaks.last().unwrap();
        if !r_max.is_finite() {
            return Err(Error::InvalidInput("grid radius must be finite".into()));
        }
        if order == 0 {
            return Err(Error::InvalidInput("panel order must be positive".into()));
        }
        let (x, w) = match scheme {
            GridScheme::CompositeGauss => gauss_legendre(order),
            GridScheme::ClenshawCurtis => clenshaw_curtis(order),
        };
        let mut nodes: Vec<f64> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for p in breaks.windows(2) {
            let (c, h) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
            for (xi, wi) in x.iter().zip(&w) {
                let r = c + h * xi;
                match nodes.last() {
                    Some(&last) if r <= last => *weights.last_mut().unwrap() += h * wi,
                    _ => {
                        nodes.push(r);
                        weights.push(h * wi);
                    }
                }
            }
        }
        Ok(RadialGrid {
            nodes,
            weights,
            breaks,
            r_max,
            scheme,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Fixed-rule approximation of `int_0^R f`.
    pub fn sum(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&r, &w)| w * f(r)).sum()
    }
}

fn uniform_breaks(r_max: f64, panels: usize) -> Result<Vec<f64>> {
    if !(r_max > 0.0) || !r_max.is_finite() || panels == 0 {
        return Err(Error::InvalidInput(format!(
            "need a finite positive radius and at least one panel, got R={r_max}, panels={panels}"
        )));
    }
    Ok((0..=panels).map(|k| r_max * k as f64 / panels as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_increase_and_weights_sum_to_length() {
        for g in [
            RadialGrid::composite_gauss(3.0, 7, 8).unwrap(),
            RadialGrid::clenshaw_curtis(3.0, 7, 8).unwrap(),
        ] {
            assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!((g.weights.iter().sum::<f64>() - 3.0).abs() < 1e-13);
            assert!((g.sum(|r| r * r) - 9.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RadialGrid::composite_gauss(-1.0, 4, 4).is_err());
        assert!(RadialGrid::from_breaks(vec![0.0, 1.0, 1.0], 4, GridScheme::CompositeGauss).is_err());
    }
}
