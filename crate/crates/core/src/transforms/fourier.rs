use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::RadialProfile;
use crate::bessel::BesselOrder;
use crate::error::{Error, Result};
use crate::numerics::{
    gauss_legendre, integrate_half_line, sphere_measure, SphereQuadrature, Tail, Tolerance,
};

/// Default accuracy for transform evaluations.
pub fn transform_tolerance() -> Tolerance {
    Tolerance::new(1e-14, 1e-12)
}

/// `f^(rho) = omega_{n-1} int_0^inf f0(r) j_{n/2-1}(r rho) r^(n-1) dr`, the
/// Fourier transform `int e^{i x.xi} f(x) dx` of the radial function at
/// `|xi| = rho`. Always computed by quadrature.
pub fn radial_fourier(profile: &RadialProfile, n: usize, rho: f64) -> Result<f64> {
    radial_fourier_with(profile, n, rho, &transform_tolerance())
}

pub fn radial_fourier_with(profile: &RadialProfile, n: usize, rho: f64, tol: &Tolerance) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("frequency must be finite and >= 0, got {rho}")));
    }
    let order = BesselOrder::for_dimension(n);
    let nm1 = n as i32 - 1;
    let integrand = |r: f64| {
        let f = profile.eval(r);
        if f == 0.0 {
            0.0
        } else {
            f * order.normalized(r * rho) * r.powi(nm1)
        }
    };
    let (mut breaks, mut tail) = profile.integration_plan();
    if rho > 0.0 {
        let reach = breaks.iter().copied().fold(0.0, f64::max);
        breaks.extend(kernel_breaks(order.alpha(), rho, reach));
        if tail == Tail::Algebraic {
            tail = Tail::Oscillatory { period: 2.0 * PI / rho };
        }
    }
    Ok(sphere_measure(n) * integrate_half_line(integrand, &breaks, tail, tol)?.value)
}

/// `f^(rho)` from the closed form when the profile carries one, otherwise by
/// quadrature.
pub fn transform_value(profile: &RadialProfile, n: usize, rho: f64) -> Result<f64> {
    match profile.known_transform(n, rho) {
        Some(v) => Ok(v),
        None => radial_fourier(profile, n, rho),
    }
}

/// Panel boundaries near the zeros of `J_alpha(r rho)`, using the large
/// argument positions `(k + alpha/2 - 1/4) pi / rho`.
fn kernel_breaks(alpha: f64, rho: f64, reach: f64) -> Vec<f64> {
    let step = PI / rho;
    let shift = (alpha / 2.0 - 0.25) * step;
    let count = ((reach - shift) / step).floor().clamp(0.0, 2e5) as usize;
    (1..=count).map(|k| k as f64 * step + shift).filter(|&r| r > 0.0 && r < reach).collect()
}

/// A compactly supported function on `[-L, L]^n`, `n = 2, 3`, sampled on a
/// tensor Gauss grid for direct Fourier sums.
#[derive(Clone)]
pub struct CartesianFunction {
    n: usize,
    points: Vec<Vec<f64>>,
    weighted_values: Vec<f64>,
}

impl CartesianFunction {
    /// `panels` Gauss panels of `order` nodes per axis over `[-half_width, half_width]`.
    pub fn new(
        n: usize,
        half_width: f64,
        panels: usize,
        order: usize,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return Err(Error::Unsupported(format!("grid functions need n = 2, 3, got {n}")));
        }
        if !(half_width > 0.0) || panels == 0 || order == 0 {
            return Err(Error::InvalidInput("grid extent, panels and order must be positive".into()));
        }
        let (x, w) = gauss_legendre(order);
        let h = 2.0 * half_width / panels as f64;
        let mut axis = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let c = -half_width + (p as f64 + 0.5) * h;
            for (xi, wi) in x.iter().zip(&w) {
                axis.push((c + 0.5 * h * xi, 0.5 * h * wi));
            }
        }
        let m = axis.len();
        let total = m.pow(n as u32);
        let mut points = Vec::with_capacity(total);
        let mut weighted_values = Vec::with_capacity(total);
        for idx in 0..total {
            let mut pt = Vec::with_capacity(n);
            let mut wt = 1.0;
            let mut k = idx;
            for _ in 0..n {
                let (xa, wa) = axis[k % m];
                pt.push(xa);
                wt *= wa;
                k /= m;
            }
            let v = f(&pt);
            if v != 0.0 {
                weighted_values.push(wt * v);
                points.push(pt);
            }
        }
        Ok(CartesianFunction {
            n,
            points,
            weighted_values,
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// `int e^{i x.xi} f(x) dx`.
    pub fn fourier(&self, xi: &[f64]) -> Complex64 {
        self.points
            .iter()
            .zip(&self.weighted_values)
            .map(|(x, &w)| {
                let phase: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
                Complex64::from_polar(w, phase)
            })
            .sum()
    }
}

/// Input to [`restriction_values`].
#[derive(Clone, Copy)]
pub enum SpatialFunction<'a> {
    Radial(&'a RadialProfile),
    Cartesian(&'a CartesianFunction),
}

/// The restriction `f^|_{S^{n-1}}` at the nodes of `quad`.
pub fn restriction_values(
    f: SpatialFunction<'_>,
    n: usize,
    quad: &SphereQuadrature,
) -> Result<Vec<Complex64>> {
    if quad.dimension() != n {
        return Err(Error::InvalidInput(format!(
            "quadrature is on S^{}, expected S^{}",
            quad.dimension() - 1,
            n - 1
        )));
    }
    match f {
        SpatialFunction::Radial(p) => {
            let v = radial_fourier(p, n, 1.0)?;
            Ok(vec![Complex64::new(v, 0.0); quad.len()])
        }
        SpatialFunction::Cartesian(c) => {
            if c.dimension() != n {
                return Err(Error::InvalidInput("grid function has the wrong dimension".into()));
            }
            Ok((0..quad.len())
                .into_par_iter()
                .map(|i| c.fourier(quad.point(i)))
                .collect())
        }
    }
}

/// The extension operator `A* g(x) = int_{S^{n-1}} g(w) e^{i w.x} U(w)^(1/q) d sigma(w)`.
///
/// Nodes where `g U^(1/q)` is not finite (for instance `g` infinite where
/// `U` vanishes) are flagged as [`Error::NotIntegrable`].
pub fn extension_operator(
    g: impl Fn(&[f64]) -> f64,
    u: impl Fn(&[f64]) -> f64,
    q: f64,
    x: &[f64],
) -> Result<Complex64> {
    let radius = x.iter().map(|t| t * t).sum::<f64>().sqrt();
    let quad = SphereQuadrature::for_bandwidth(x.len(), radius)?;
    extension_operator_with(&quad, g, u, q, x)
}

/// [`extension_operator`] with an explicit sphere rule.
pub fn extension_operator_with(
    quad: &SphereQuadrature,
    g: impl Fn(&[f64]) -> f64,
    u: impl Fn(&[f64]) -> f64,
    q: f64,
    x: &[f64],
) -> Result<Complex64> {
    if x.len() != quad.dimension() {
        return Err(Error::InvalidInput("point and sphere dimensions differ".into()));
    }
    if !(q >= 1.0) {
        return Err(Error::InvalidInput(format!("need q >= 1, got {q}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, c) in quad.iter() {
        let uw = u(w);
        if !(uw >= 0.0) {
            return Err(Error::InvalidInput(format!("sphere weight must be >= 0, got {uw}")));
        }
        let gw = g(w);
        let factor = if uw == 0.0 && gw.is_finite() {
            0.0
        } else {
            gw * uw.powf(1.0 / q)
        };
        if !factor.is_finite() {
            return Err(Error::NotIntegrable(format!(
                "g U^(1/q) is not finite at {w:?} (g = {gw}, U = {uw})"
            )));
        }
        let phase: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum();
        acc += Complex64::from_polar(c * factor, phase);
    }
    Ok(acc)
}

/// `omega_{n-1} j_{n/2-1}(|x|)`, the extension of the constant 1.
pub fn extension_of_constant(n: usize, radius: f64) -> f64 {
    sphere_measure(n) * BesselOrder::for_dimension(n).normalized(radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_self_transform() {
        let g = RadialProfile::gaussian();
        for n in [1, 2, 3, 5] {
            for rho in [0.0f64, 0.7, 2.0, 4.0] {
                let want = (2.0 * PI).powf(n as f64 / 2.0) * (-rho * rho / 2.0).exp();
                let got = radial_fourier(&g, n, rho).unwrap();
                assert!((got - want).abs() < 1e-10 * want, "n={n} rho={rho}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn interval_and_ball_indicators() {
        let s = 1.7;
        let p = RadialProfile::indicator(s);
        for &rho in &[0.3, 1.0, 5.5] {
            let got = radial_fourier(&p, 1, rho).unwrap();
            assert!((got - 2.0 * (s * rho).sin() / rho).abs() < 1e-12);
            let closed = p.known_transform(1, rho).unwrap();
            assert!((closed - got).abs() < 1e-12);
        }
        let b = RadialProfile::indicator(1.0);
        for rho in [0.5f64, 1.0, 2.0] {
            let want = 4.0 * PI * (rho.sin() - rho * rho.cos()) / rho.powi(3);
            assert!((radial_fourier(&b, 3, rho).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn extension_of_one() {
        for n in [2, 3] {
            let x: Vec<f64> = if n == 2 { vec![0.0, 0.0] } else { vec![0.0; 3] };
            let v = extension_operator(|_| 1.0, |_| 1.0, 2.0, &x).unwrap();
            assert!((v.re - sphere_measure(n)).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
        let v = extension_operator(|_| 1.0, |_| 1.0, 2.0, &[0.0, 0.0, PI]).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn extension_flags_nonintegrable_data() {
        let r = extension_operator(
            |w| if w[0] > 0.0 { f64::INFINITY } else { 1.0 },
            |w| if w[0] > 0.0 { 0.0 } else { 1.0 },
            2.0,
            &[1.0, 0.0],
        );
        assert!(matches!(r, Err(Error::NotIntegrable(_))));
    }
}
