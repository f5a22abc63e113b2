use std::sync::Arc;

use super::fourier::transform_value;
use super::{Decay, RadialProfile};
use crate::bessel::BesselOrder;
use crate::error::{Error, Result};
use crate::numerics::{
    integrate_breaks, integrate_half_line, sphere_integrate, sphere_measure, weighted_lp_norm,
    SphereQuadrature, Tail, Tolerance,
};
use crate::weights::Weight;

fn mean_tolerance() -> Tolerance {
    Tolerance::new(1e-15, 1e-13)
}

/// `V_t f(r)`: the average of `f` over the sphere of radius `t` about a point
/// at distance `r` from the origin,
/// `c_n int_0^pi f0(sqrt(r^2 + t^2 + 2 r t cos th)) sin^(n-2) th d th`.
pub fn spherical_mean(profile: &RadialProfile, n: usize, t: f64, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    if !(t >= 0.0) || !(r >= 0.0) || !t.is_finite() || !r.is_finite() {
        return Err(Error::Domain(format!("need finite t, r >= 0, got t = {t}, r = {r}")));
    }
    if n == 1 {
        return Ok(0.5 * (profile.eval(r + t) + profile.eval((r - t).abs())));
    }
    if t == 0.0 {
        return Ok(profile.eval(r));
    }
    if r == 0.0 {
        return Ok(profile.eval(t));
    }
    let nm2 = n as i32 - 2;
    let (rr, tt) = (r * r + t * t, 2.0 * r * t);
    let integrand = |th: f64| {
        let (s, c) = th.sin_cos();
        profile.eval((rr + tt * c).max(0.0).sqrt()) * s.powi(nm2)
    };
    let mut breaks = vec![0.0];
    let (plan, _) = profile.integration_plan();
    for b in plan {
        let c = (b * b - rr) / tt;
        if c > -1.0 && c < 1.0 {
            breaks.push(c.acos());
        }
    }
    breaks.push(std::f64::consts::PI);
    breaks.sort_by(f64::total_cmp);
    let v = integrate_breaks(integrand, &breaks, &mean_tolerance())?.value;
    Ok(v * sphere_measure(n - 1) / sphere_measure(n))
}

/// Average of a function on `R^n`, `n = 2, 3`, over the sphere of radius `t`
/// about `x`.
pub fn spherical_mean_at(
    f: impl Fn(&[f64]) -> f64,
    x: &[f64],
    t: f64,
    quad: &SphereQuadrature,
) -> Result<f64> {
    let n = quad.dimension();
    if x.len() != n {
        return Err(Error::InvalidInput("point and sphere dimensions differ".into()));
    }
    let total = sphere_integrate(
        |w| {
            let y: Vec<f64> = x.iter().zip(w).map(|(a, b)| a + t * b).collect();
            f(&y)
        },
        quad,
    );
    Ok(total / sphere_measure(n))
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficients `c_j`, `j = 1..=l`, with `V_{l,t} = sum_j c_j V_{jt}`:
/// `c_j = -2 / C(2l, l) (-1)^j C(2l, l - j)`.
pub fn v_lt_coefficients(l: usize) -> Vec<f64> {
    let l = l as u64;
    let mid = binomial(2 * l, l);
    (1..=l)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            -2.0 / mid * sign * binomial(2 * l, l - j)
        })
        .collect()
}

/// Fourier multiplier of `V_{l,t}`: `m(rho) = sum_j c_j j_{n/2-1}(j t rho)`.
pub fn v_lt_multiplier(n: usize, l: usize, t: f64, rho: f64) -> f64 {
    let order = BesselOrder::for_dimension(n);
    v_lt_coefficients(l)
        .iter()
        .enumerate()
        .map(|(i, c)| c * order.normalized((i + 1) as f64 * t * rho))
        .sum()
}

fn shifted_decay(decay: Decay, shift: f64) -> Decay {
    match decay {
        Decay::Compact { radius } => Decay::Compact { radius: radius + shift },
        Decay::Gaussian { scale } => Decay::Gaussian {
            scale: scale + shift / 12.0,
        },
        Decay::Exponential { rate } => Decay::Exponential {
            rate: 80.0 / (80.0 / rate + shift),
        },
        p => p,
    }
}

fn combined_breaks(profile: &RadialProfile, l: usize, t: f64) -> Vec<f64> {
    let (plan, _) = profile.integration_plan();
    let mut out = Vec::new();
    for j in 1..=l {
        let s = j as f64 * t;
        for &b in &plan {
            out.push(b + s);
            out.push((b - s).abs());
        }
    }
    out
}

/// `V_{l,t} f` as a new radial profile. Quadrature failures inside show up
/// as NaN values.
pub fn v_lt(profile: &RadialProfile, n: usize, l: usize, t: f64) -> Result<RadialProfile> {
    check_lt(n, l, t)?;
    let coeffs = v_lt_coefficients(l);
    let base = profile.clone();
    let f = move |r: f64| {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * spherical_mean(&base, n, (i + 1) as f64 * t, r).unwrap_or(f64::NAN))
            .sum()
    };
    let mut p = RadialProfile::new_unchecked(
        format!("V_{{{l},{t}}}{}", profile.label()),
        shifted_decay(profile.decay(), l as f64 * t),
        combined_breaks(profile, l, t),
        Arc::new(f),
    );
    if profile.has_known_transform() {
        let base = profile.clone();
        p = p.with_transform(move |dim, rho| {
            v_lt_multiplier(dim, l, t, rho) * base.known_transform(dim, rho).unwrap_or(f64::NAN)
        });
    }
    Ok(p)
}

/// `f - V_{l,t} f` as a radial profile.
pub fn modulus_difference(profile: &RadialProfile, n: usize, l: usize, t: f64) -> Result<RadialProfile> {
    let v = v_lt(profile, n, l, t)?;
    let (fa, fv) = (profile.evaluator(), v.evaluator());
    let mut breaks = combined_breaks(profile, l, t);
    breaks.extend_from_slice(profile.breaks());
    let mut p = RadialProfile::new_unchecked(
        format!("(I - V_{{{l},{t}}}){}", profile.label()),
        v.decay(),
        breaks,
        Arc::new(move |r: f64| fa(r) - fv(r)),
    );
    if profile.has_known_transform() {
        let base = profile.clone();
        p = p.with_transform(move |dim, rho| {
            (1.0 - v_lt_multiplier(dim, l, t, rho)) * base.known_transform(dim, rho).unwrap_or(f64::NAN)
        });
    }
    Ok(p)
}

/// `Omega_l(f, t)_p = || f - V_{l,t} f ||_p`, computed in physical space.
pub fn modulus_omega(profile: &RadialProfile, n: usize, l: usize, t: f64, p: f64) -> Result<f64> {
    check_lt(n, l, t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let d = modulus_difference(profile, n, l, t)?;
    weighted_lp_norm(&d, &Weight::constant(), p, n)
}

/// `Omega_l(f, t)_2` from the transform side,
/// `(2 pi)^(-n/2) || (1 - m) f^ ||_2`.
pub fn modulus_omega_fourier(profile: &RadialProfile, n: usize, l: usize, t: f64) -> Result<f64> {
    check_lt(n, l, t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let nm1 = n as i32 - 1;
    let integrand = |rho: f64| {
        let fh = transform_value(profile, n, rho).unwrap_or(f64::NAN);
        let g = (1.0 - v_lt_multiplier(n, l, t, rho)) * fh;
        g * g * rho.powi(nm1)
    };
    let tol = Tolerance::new(1e-15, 1e-13);
    let value = match profile.decay() {
        Decay::Gaussian { scale } => {
            let cut = 12.0 / scale;
            let step = std::f64::consts::PI / (l as f64 * t);
            let mut breaks: Vec<f64> = (0..).map(|k| k as f64 * step).take_while(|&x| x < cut).collect();
            breaks.push(cut);
            integrate_breaks(integrand, &breaks, &tol)?.value
        }
        Decay::Compact { radius } => {
            // the squared transform oscillates with period pi / radius
            let step = std::f64::consts::PI / radius.max(l as f64 * t);
            let breaks: Vec<f64> = (1..=64).map(|k| k as f64 * step).collect();
            integrate_half_line(&integrand, &breaks, Tail::Oscillatory { period: step }, &tol)?.value
        }
        _ => {
            let breaks = [0.0, 1.0];
            integrate_half_line(&integrand, &breaks, Tail::Algebraic, &tol)?.value
        }
    };
    Ok((sphere_measure(n) * value).sqrt() / (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0))
}

fn check_lt(n: usize, l: usize, t: f64) -> Result<()> {
    if n == 0 || l == 0 {
        return Err(Error::InvalidInput("dimension and order l must be positive".into()));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("need finite t >= 0, got {t}")));
    }
    Ok(())
}

/// A function on an interval `[lo, hi]` of the line with optional kinks.
#[derive(Clone)]
pub struct Function1d {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    lo: f64,
    hi: f64,
    breaks: Vec<f64>,
}

impl Function1d {
    pub fn new(lo: f64, hi: f64, breaks: Vec<f64>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput(format!("bad window [{lo}, {hi}]")));
        }
        Ok(Function1d {
            f: Arc::new(f),
            lo,
            hi,
            breaks,
        })
    }

    /// `(1 - |x| / radius)_+` on `[-window, window]`.
    pub fn hat(radius: f64, window: f64) -> Result<Self> {
        Self::new(-window, window, vec![-radius, 0.0, radius], move |x| {
            (1.0 - x.abs() / radius).max(0.0)
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn window(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// `int e^{i x xi} f(x) dx` over the window.
    pub fn fourier(&self, xi: f64) -> Result<(f64, f64)> {
        let mut breaks = self.window_breaks(0.0, 0);
        if xi != 0.0 {
            let step = std::f64::consts::PI / xi.abs();
            let count = ((self.hi - self.lo) / step).min(1e5) as usize;
            breaks.extend((1..count).map(|k| self.lo + k as f64 * step));
        }
        breaks.sort_by(f64::total_cmp);
        let l1 = integrate_breaks(|x| self.eval(x).abs(), &breaks, &Tolerance::new(1e-15, 1e-10))?.value;
        let tol = Tolerance::new(1e-14 * l1, 1e-12);
        let re = integrate_breaks(|x| self.eval(x) * (x * xi).cos(), &breaks, &tol)?.value;
        let im = integrate_breaks(|x| self.eval(x) * (x * xi).sin(), &breaks, &tol)?.value;
        Ok((re, im))
    }

    fn window_breaks(&self, h: f64, l: usize) -> Vec<f64> {
        let end = self.hi - l as f64 * h;
        let mut b = vec![self.lo, end];
        for &k in &self.breaks {
            for i in 0..=l {
                let x = k - i as f64 * h;
                if x > self.lo && x < end {
                    b.push(x);
                }
            }
        }
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// `Delta_h^l f(x) = sum_k (-1)^(l-k) C(l, k) f(x + k h)`.
    pub fn difference(&self, l: usize, h: f64, x: f64) -> f64 {
        (0..=l)
            .map(|k| {
                let sign = if (l - k) % 2 == 0 { 1.0 } else { -1.0 };
                sign * binomial(l as u64, k as u64) * self.eval(x + k as f64 * h)
            })
            .sum()
    }

    /// `|| Delta_h^l f ||_p` over `x in [lo, hi - l h]`.
    pub fn difference_norm(&self, l: usize, h: f64, p: f64) -> Result<f64> {
        let end = self.hi - l as f64 * h;
        if end <= self.lo {
            return Ok(0.0);
        }
        if p.is_infinite() {
            let m = 4000;
            let mut best: f64 = 0.0;
            for i in 0..=m {
                let x = self.lo + (end - self.lo) * i as f64 / m as f64;
                best = best.max(self.difference(l, h, x).abs());
            }
            for x in self.window_breaks(h, l) {
                best = best.max(self.difference(l, h, x).abs());
            }
            return Ok(best);
        }
        let tol = Tolerance::new(1e-15, 1e-12);
        let v = integrate_breaks(|x| self.difference(l, h, x).abs().powf(p), &self.window_breaks(h, l), &tol)?;
        Ok(v.value.powf(1.0 / p))
    }
}

/// `omega_l(f, delta)_p = sup_{0 < h <= delta} || Delta_h^l f ||_p`.
///
/// The supremum is taken over an equispaced `h`-grid followed by a
/// golden-section polish around the best grid point.
pub fn classical_modulus_1d(f: &Function1d, l: usize, delta: f64, p: f64) -> Result<f64> {
    if l == 0 {
        return Err(Error::InvalidInput("order l must be positive".into()));
    }
    if !(delta >= 0.0) || !(p >= 1.0) {
        return Err(Error::InvalidInput(format!("need delta >= 0 and p >= 1, got {delta}, {p}")));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    const K: usize = 64;
    let mut vals = Vec::with_capacity(K);
    for k in 1..=K {
        vals.push(f.difference_norm(l, delta * k as f64 / K as f64, p)?);
    }
    let (kbest, mut best) = vals
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let h = |k: usize| delta * k as f64 / K as f64;
    let (mut a, mut b) = (h(kbest), h((kbest + 2).min(K)));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..40 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        let (fc, fd) = (f.difference_norm(l, c, p)?, f.difference_norm(l, d, p)?);
        best = best.max(fc).max(fd);
        if fc >= fd {
            b = d;
        } else {
            a = c;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_of_constant_is_one() {
        let one = RadialProfile::constant(1.0);
        for n in [1, 2, 3, 4, 7] {
            for &(t, r) in &[(0.3, 0.0), (1.0, 2.0), (2.5, 0.4)] {
                let v = spherical_mean(&one, n, t, r).unwrap();
                assert!((v - 1.0).abs() < 1e-12, "n={n}: {v}");
            }
        }
    }

    #[test]
    fn gaussian_mean_in_three_dimensions() {
        // n = 3: V_t f(r) = (1 / 2rt) int_{|r-t|}^{r+t} f0(s) s ds
        let g = RadialProfile::gaussian();
        for &(t, r) in &[(0.5, 1.0), (2.0, 0.7), (1.3, 1.3)] {
            let a: f64 = (r - t) * (r - t) / 2.0;
            let b: f64 = (r + t) * (r + t) / 2.0;
            let want = ((-a).exp() - (-b).exp()) / (2.0 * r * t);
            let got = spherical_mean(&g, 3, t, r).unwrap();
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
    }

    #[test]
    fn coefficients_sum_to_one() {
        assert_eq!(v_lt_coefficients(1), vec![1.0]);
        for l in 1..=8 {
            let s: f64 = v_lt_coefficients(l).iter().sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
        // l = 2: (4/3, -1/3)
        let c = v_lt_coefficients(2);
        assert!((c[0] - 4.0 / 3.0).abs() < 1e-15 && (c[1] + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn one_dimensional_modulus_is_second_difference() {
        // n = 1, l = 1: f - V_t f = -(f(r+t) - 2 f(r) + f(r-t)) / 2
        let g = RadialProfile::gaussian();
        let d = modulus_difference(&g, 1, 1, 0.4).unwrap();
        let r: f64 = 0.9;
        let f = |x: f64| (-x * x / 2.0).exp();
        let want = -(f(r + 0.4) - 2.0 * f(r) + f(r - 0.4)) / 2.0;
        assert!((d.eval(r) - want).abs() < 1e-15);
    }

    #[test]
    fn gaussian_modulus_two_ways() {
        let g = RadialProfile::gaussian();
        for n in [1, 3] {
            let a = modulus_omega(&g, n, 2, 0.5, 2.0).unwrap();
            let b = modulus_omega_fourier(&g, n, 2, 0.5).unwrap();
            assert!((a - b).abs() < 1e-7 * b, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn affine_functions_have_zero_second_modulus() {
        let f = Function1d::new(-1.0, 2.0, vec![], |x| 3.0 * x - 1.0).unwrap();
        for p in [1.0, 2.0, f64::INFINITY] {
            assert!(classical_modulus_1d(&f, 2, 0.5, p).unwrap() < 1e-12);
        }
    }

    #[test]
    fn square_sup_modulus() {
        // sup_{h<=d} max_{x in [0, 1-h]} |2 x h + h^2| = 2 d - d^2 for d <= 1
        let f = Function1d::new(0.0, 1.0, vec![], |x| x * x).unwrap();
        for d in [0.1, 0.5, 0.9] {
            let got = classical_modulus_1d(&f, 1, d, f64::INFINITY).unwrap();
            let want: f64 = (0..=10000)
                .map(|k| {
                    let h = d * k as f64 / 10000.0;
                    (2.0 * (1.0 - h) * h + h * h).abs()
                })
                .fold(0.0, f64::max);
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn hat_transform() {
        let f = Function1d::hat(1.0, 3.0).unwrap();
        for xi in [0.5, 3.0, 20.0] {
            let (re, im) = f.fourier(xi).unwrap();
            let want = 2.0 * (1.0 - f64::cos(xi)) / (xi * xi);
            assert!((re - want).abs() < 1e-12 && im.abs() < 1e-12);
        }
    }
}
