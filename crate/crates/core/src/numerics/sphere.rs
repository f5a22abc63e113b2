use std::f64::consts::PI;

use num_complex::Complex64;

use super::gauss::gauss_legendre;
use crate::error::{Error, Result};

/// Surface measure `2 pi^(n/2) / Gamma(n/2)` of the unit sphere in `R^n`.
pub fn sphere_measure(n: usize) -> f64 {
    // omega_{n-1} = 2 pi / (n - 2) * omega_{n-3}, exact up to rounding.
    match n {
        0 => panic!("dimension must be positive"),
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 2.0) * sphere_measure(n - 2),
    }
}

/// Volume of the unit ball in `R^n`.
pub fn ball_volume(n: usize) -> f64 {
    sphere_measure(n) / n as f64
}

/// Product rule on `S^{n-1}` for `n = 2, 3`.
///
/// On the circle it is the equispaced trapezoid rule, exact for
/// trigonometric polynomials of degree below the point count. On `S^2` it is
/// Gauss–Legendre in `cos(theta)` times the trapezoid rule in azimuth.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    n: usize,
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl SphereQuadrature {
    /// `points` equispaced nodes on the circle.
    pub fn circle(points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::InvalidInput("need at least one node".into()));
        }
        let w = 2.0 * PI / points as f64;
        let pts = (0..points)
            .map(|k| {
                let (s, c) = (2.0 * PI * k as f64 / points as f64).sin_cos();
                [c, s, 0.0]
            })
            .collect();
        Ok(SphereQuadrature {
            n: 2,
            points: pts,
            weights: vec![w; points],
        })
    }

    /// `polar` Gauss nodes in `cos(theta)` times `azimuth` trapezoid nodes.
    pub fn sphere(polar: usize, azimuth: usize) -> Result<Self> {
        if polar == 0 || azimuth == 0 {
            return Err(Error::InvalidInput("need at least one node per direction".into()));
        }
        let (z, wz) = gauss_legendre(polar);
        let dphi = 2.0 * PI / azimuth as f64;
        let mut points = Vec::with_capacity(polar * azimuth);
        let mut weights = Vec::with_capacity(polar * azimuth);
        for (&zi, &wi) in z.iter().zip(&wz) {
            let s = (1.0 - zi * zi).max(0.0).sqrt();
            for k in 0..azimuth {
                let (sp, cp) = (dphi * k as f64).sin_cos();
                points.push([s * cp, s * sp, zi]);
                weights.push(wi * dphi);
            }
        }
        Ok(SphereQuadrature {
            n: 3,
            points,
            weights,
        })
    }

    /// A rule that integrates spherical harmonics up to `degree` exactly.
    pub fn for_degree(n: usize, degree: usize) -> Result<Self> {
        match n {
            2 => Self::circle(degree + 1),
            3 => Self::sphere(degree / 2 + 1, degree + 1),
            _ => Err(Error::Unsupported(format!(
                "sphere quadrature is available for n = 2, 3 only, got n = {n}"
            ))),
        }
    }

    /// A rule accurate to roughly machine precision for `e^{i w.x}` with
    /// `|x| <= radius` times smooth factors.
    pub fn for_bandwidth(n: usize, radius: f64) -> Result<Self> {
        let degree = (1.3 * radius.abs()).ceil() as usize + 40;
        Self::for_degree(n, degree)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The `i`-th node as a slice of length `n`.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i][..self.n]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        (0..self.len()).map(move |i| (self.point(i), self.weights[i]))
    }
}

/// `int_{S^{n-1}} g d(sigma)`.
pub fn sphere_integrate(g: impl Fn(&[f64]) -> f64, quad: &SphereQuadrature) -> f64 {
    quad.iter().map(|(w, c)| c * g(w)).sum()
}

/// Complex-valued version of [`sphere_integrate`].
pub fn sphere_integrate_complex(g: impl Fn(&[f64]) -> Complex64, quad: &SphereQuadrature) -> Complex64 {
    quad.iter().map(|(w, c)| g(w) * c).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_integrate_to_surface_measure() {
        let c = SphereQuadrature::circle(17).unwrap();
        assert!((sphere_integrate(|_| 1.0, &c) - 2.0 * PI).abs() < 1e-13);
        let s = SphereQuadrature::sphere(9, 18).unwrap();
        assert!((sphere_integrate(|_| 1.0, &s) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_measure(3) - 4.0 * PI).abs() < 1e-14);
        assert!((ball_volume(2) - PI).abs() < 1e-14);
    }

    #[test]
    fn points_are_unit_vectors() {
        let s = SphereQuadrature::for_degree(3, 20).unwrap();
        for (w, _) in s.iter() {
            let r: f64 = w.iter().map(|x| x * x).sum();
            assert!((r - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn harmonics_vanish() {
        let s = SphereQuadrature::for_degree(3, 12).unwrap();
        // Y ~ x*y*z and P_2(z)
        assert!(sphere_integrate(|w| w[0] * w[1] * w[2], &s).abs() < 1e-14);
        assert!(sphere_integrate(|w| 1.5 * w[2] * w[2] - 0.5, &s).abs() < 1e-13);
        let c = SphereQuadrature::for_degree(2, 12).unwrap();
        assert!(sphere_integrate(|w| w[0] * w[0] - w[1] * w[1], &c).abs() < 1e-14);
    }

    #[test]
    fn other_dimensions_are_rejected() {
        assert!(SphereQuadrature::for_degree(4, 3).is_err());
    }
}
