//! Centrally symmetric convex bodies, their polars, dilates and unions of
//! disjoint translates.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bessel::{first_positive_zero, BesselOrder};
use crate::error::{Error, Result};
use crate::numerics::{ball_volume, integrate_breaks, integrate_from_zero, sphere_measure, Tolerance};
use crate::weights::Weight;

/// A centrally symmetric convex body containing a neighbourhood of 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ConvexBody {
    Ball { n: usize, radius: f64 },
    Ellipsoid { axes: Vec<f64> },
    Box { half_widths: Vec<f64> },
    /// `{ x : sum_i w_i |x_i| <= 1 }`.
    CrossPolytope { weights: Vec<f64> },
}

fn check_positive(v: &[f64], what: &str) -> Result<()> {
    if v.is_empty() || v.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
        return Err(Error::InvalidInput(format!("{what} must be positive and finite, got {v:?}")));
    }
    Ok(())
}

impl ConvexBody {
    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        check_positive(&[radius], "radius")?;
        Ok(ConvexBody::Ball { n, radius })
    }

    pub fn ellipsoid(axes: Vec<f64>) -> Result<Self> {
        check_positive(&axes, "semi-axes")?;
        Ok(ConvexBody::Ellipsoid { axes })
    }

    pub fn cuboid(half_widths: Vec<f64>) -> Result<Self> {
        check_positive(&half_widths, "half-widths")?;
        Ok(ConvexBody::Box { half_widths })
    }

    /// The cube `[-s, s]^n`.
    pub fn cube(n: usize, s: f64) -> Result<Self> {
        Self::cuboid(vec![s; n])
    }

    pub fn cross_polytope(weights: Vec<f64>) -> Result<Self> {
        check_positive(&weights, "cross-polytope weights")?;
        Ok(ConvexBody::CrossPolytope { weights })
    }

    pub fn dimension(&self) -> usize {
        match self {
            ConvexBody::Ball { n, .. } => *n,
            ConvexBody::Ellipsoid { axes } => axes.len(),
            ConvexBody::Box { half_widths } => half_widths.len(),
            ConvexBody::CrossPolytope { weights } => weights.len(),
        }
    }

    /// `h_A(xi) = sup_{x in A} x . xi`.
    pub fn support(&self, xi: &[f64]) -> f64 {
        match self {
            ConvexBody::Ball { radius, .. } => radius * norm(xi),
            ConvexBody::Ellipsoid { axes } => axes.iter().zip(xi).map(|(a, x)| (a * x).powi(2)).sum::<f64>().sqrt(),
            ConvexBody::Box { half_widths } => half_widths.iter().zip(xi).map(|(s, x)| s * x.abs()).sum(),
            ConvexBody::CrossPolytope { weights } => {
                weights.iter().zip(xi).map(|(w, x)| x.abs() / w).fold(0.0, f64::max)
            }
        }
    }

    /// Minkowski gauge: the least `t >= 0` with `x in t A`.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        match self {
            ConvexBody::Ball { radius, .. } => norm(x) / radius,
            ConvexBody::Ellipsoid { axes } => axes.iter().zip(x).map(|(a, y)| (y / a).powi(2)).sum::<f64>().sqrt(),
            ConvexBody::Box { half_widths } => half_widths.iter().zip(x).map(|(s, y)| y.abs() / s).fold(0.0, f64::max),
            ConvexBody::CrossPolytope { weights } => weights.iter().zip(x).map(|(w, y)| w * y.abs()).sum(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.gauge(x) <= 1.0
    }

    /// `A* = { xi : |x . xi| <= 1 for all x in A }`, in closed form.
    pub fn polar(&self) -> ConvexBody {
        match self {
            ConvexBody::Ball { n, radius } => ConvexBody::Ball { n: *n, radius: 1.0 / radius },
            ConvexBody::Ellipsoid { axes } => ConvexBody::Ellipsoid {
                axes: axes.iter().map(|a| 1.0 / a).collect(),
            },
            ConvexBody::Box { half_widths } => ConvexBody::CrossPolytope {
                weights: half_widths.clone(),
            },
            ConvexBody::CrossPolytope { weights } => ConvexBody::Box {
                half_widths: weights.clone(),
            },
        }
    }

    /// `c A` for any `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<ConvexBody> {
        check_positive(&[c], "dilation")?;
        Ok(match self {
            ConvexBody::Ball { n, radius } => ConvexBody::Ball { n: *n, radius: radius * c },
            ConvexBody::Ellipsoid { axes } => ConvexBody::Ellipsoid {
                axes: axes.iter().map(|a| a * c).collect(),
            },
            ConvexBody::Box { half_widths } => ConvexBody::Box {
                half_widths: half_widths.iter().map(|s| s * c).collect(),
            },
            ConvexBody::CrossPolytope { weights } => ConvexBody::CrossPolytope {
                weights: weights.iter().map(|w| w / c).collect(),
            },
        })
    }

    /// `c A*` for the general necessary condition, which needs `0 < c < pi/2`.
    pub fn dilated_polar(&self, c: f64) -> Result<ConvexBody> {
        if !(c > 0.0 && c < PI / 2.0) {
            return Err(Error::Domain(format!("the dilation must satisfy 0 < c < pi/2, got {c}")));
        }
        self.polar().scaled(c)
    }

    pub fn volume(&self) -> f64 {
        let n = self.dimension();
        match self {
            ConvexBody::Ball { radius, .. } => ball_volume(n) * radius.powi(n as i32),
            ConvexBody::Ellipsoid { axes } => ball_volume(n) * axes.iter().product::<f64>(),
            ConvexBody::Box { half_widths } => half_widths.iter().map(|s| 2.0 * s).product(),
            ConvexBody::CrossPolytope { weights } => {
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                2f64.powi(n as i32) / fact / weights.iter().product::<f64>()
            }
        }
    }

    /// Largest `|x|` over the body.
    pub fn circumradius(&self) -> f64 {
        match self {
            ConvexBody::Ball { radius, .. } => *radius,
            ConvexBody::Ellipsoid { axes } => axes.iter().copied().fold(0.0, f64::max),
            ConvexBody::Box { half_widths } => norm(half_widths),
            ConvexBody::CrossPolytope { weights } => weights.iter().map(|w| 1.0 / w).fold(0.0, f64::max),
        }
    }

    /// Points on the boundary where the body is not smooth or the radial
    /// function has a kink, as polar angles (used for `n = 2`).
    fn kink_angles(&self) -> Vec<f64> {
        let mut a: Vec<f64> = (0..=8).map(|k| k as f64 * PI / 4.0).collect();
        if let ConvexBody::Box { half_widths } = self {
            if half_widths.len() == 2 {
                let t = half_widths[1].atan2(half_widths[0]);
                a.extend([t, PI - t, PI + t, 2.0 * PI - t]);
            }
        }
        a.sort_by(f64::total_cmp);
        a.dedup();
        a
    }
}

/// `c_n` for the radial necessary condition must lie below the first
/// positive zero of `J_{n/2-1}`.
pub fn radial_dilation_bound(n: usize) -> f64 {
    first_positive_zero(BesselOrder::for_dimension(n))
}

/// Check `0 < c < q_{n/2-1}` for radial contexts.
pub fn check_radial_dilation(n: usize, c: f64) -> Result<()> {
    let q = radial_dilation_bound(n);
    if !(c > 0.0 && c < q) {
        return Err(Error::Domain(format!(
            "the radial dilation must satisfy 0 < c < {q} (first zero of J_{{n/2-1}}), got {c}"
        )));
    }
    Ok(())
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// Translates `A + x_j` of one body, certified pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslatedUnion {
    base: ConvexBody,
    translations: Vec<Vec<f64>>,
    /// Smallest pairwise gauge `||x_i - x_j||_A`; disjointness needs `> 2`.
    separation: f64,
}

/// Relative margin required beyond the touching distance.
const DISJOINT_MARGIN: f64 = 1e-9;

impl TranslatedUnion {
    pub fn new(base: ConvexBody, translations: Vec<Vec<f64>>) -> Result<Self> {
        let n = base.dimension();
        if translations.is_empty() || translations.iter().any(|x| x.len() != n) {
            return Err(Error::InvalidInput(format!(
                "need at least one translation vector of length {n}"
            )));
        }
        let mut separation = f64::INFINITY;
        for i in 0..translations.len() {
            for j in 0..i {
                let d: Vec<f64> = translations[i].iter().zip(&translations[j]).map(|(a, b)| a - b).collect();
                // A + x and A + y meet iff x - y lies in A - A = 2A
                let g = base.gauge(&d);
                if g <= 2.0 * (1.0 + DISJOINT_MARGIN) {
                    return Err(Error::InvalidInput(format!(
                        "translates {j} and {i} overlap (gauge of the difference {g} <= 2)"
                    )));
                }
                separation = separation.min(g);
            }
        }
        Ok(TranslatedUnion {
            base,
            translations,
            separation,
        })
    }

    pub fn base(&self) -> &ConvexBody {
        &self.base
    }

    pub fn translations(&self) -> &[Vec<f64>] {
        &self.translations
    }

    /// The disjointness certificate: minimal pairwise gauge separation.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.translations.iter().any(|t| {
            let y: Vec<f64> = x.iter().zip(t).map(|(a, b)| a - b).collect();
            self.base.contains(&y)
        })
    }

    pub fn volume(&self) -> f64 {
        self.base.volume() * self.translations.len() as f64
    }
}

/// Domain of integration for [`body_integral`].
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Body(ConvexBody),
    Union(TranslatedUnion),
}

impl From<ConvexBody> for Region {
    fn from(b: ConvexBody) -> Self {
        Region::Body(b)
    }
}

impl From<TranslatedUnion> for Region {
    fn from(u: TranslatedUnion) -> Self {
        Region::Union(u)
    }
}

fn tolerance() -> Tolerance {
    Tolerance::new(1e-300, 1e-10)
}

fn divergent(e: &Error) -> bool {
    matches!(e, Error::NotIntegrable(_)) || matches!(e, Error::NonConvergence { value, .. } if value.abs() > 1e150)
}

/// `int_0^R w(c + r th) r^(n-1) dr` along one ray.
fn ray_integral(w: &Weight, center: &[f64], dir: &[f64], big_r: f64, n: usize) -> Result<f64> {
    let nm1 = n as i32 - 1;
    let f = |r: f64| {
        let x: Vec<f64> = center.iter().zip(dir).map(|(c, d)| c + r * d).collect();
        let v = w.value(&x);
        if v == 0.0 {
            0.0
        } else {
            v * r.powi(nm1)
        }
    };
    let at_center = center.iter().all(|c| *c == 0.0);
    let mut pts = vec![0.0, big_r];
    if at_center && w.is_radial() {
        pts.extend(w.breakpoints(big_r));
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let singular = !f(0.0).is_finite() || (at_center && !w.value(&vec![0.0; n]).is_finite());
    let r = if singular {
        let first = pts[1];
        integrate_from_zero(f, first, &tolerance()).and_then(|h| {
            Ok(h.value + integrate_breaks(f, &pts[1..], &tolerance())?.value)
        })
    } else {
        integrate_breaks(f, &pts, &tolerance()).map(|e| e.value)
    };
    match r {
        Ok(v) => Ok(v),
        Err(e) if divergent(&e) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

fn body_about(w: &Weight, body: &ConvexBody, center: &[f64], n: usize) -> Result<f64> {
    let radial_extent = |dir: &[f64]| 1.0 / body.gauge(dir);
    match n {
        1 => {
            let h = radial_extent(&[1.0]);
            Ok(ray_integral(w, center, &[1.0], h, 1)? + ray_integral(w, center, &[-1.0], h, 1)?)
        }
        2 => {
            let g = |th: f64| {
                let d = [th.cos(), th.sin()];
                ray_integral(w, center, &d, radial_extent(&d), 2).unwrap_or(f64::NAN)
            };
            finite_or_inf(integrate_breaks(g, &body.kink_angles(), &tolerance()))
        }
        3 => {
            let g = |phi: f64| {
                let (sp, cp) = phi.sin_cos();
                let inner = |th: f64| {
                    let d = [sp * th.cos(), sp * th.sin(), cp];
                    ray_integral(w, center, &d, radial_extent(&d), 3).unwrap_or(f64::NAN)
                };
                let breaks: Vec<f64> = (0..=8).map(|k| k as f64 * PI / 4.0).collect();
                sp * integrate_breaks(inner, &breaks, &Tolerance::new(1e-300, 1e-9))
                    .map(|e| e.value)
                    .unwrap_or(f64::NAN)
            };
            let breaks: Vec<f64> = (0..=4).map(|k| k as f64 * PI / 4.0).collect();
            finite_or_inf(integrate_breaks(g, &breaks, &Tolerance::new(1e-300, 1e-9)))
        }
        _ => Err(Error::Unsupported(format!(
            "integrals over non-ball bodies need n <= 3, got {n}"
        ))),
    }
}

fn finite_or_inf(r: Result<crate::numerics::Estimate>) -> Result<f64> {
    match r {
        Ok(e) if e.value.is_nan() => Err(Error::NotIntegrable("integrand is not finite on the region".into())),
        Ok(e) => Ok(e.value),
        Err(e) if divergent(&e) => Ok(f64::INFINITY),
        Err(Error::InvalidInput(_)) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// `int_region w(x) dx`. Radial weights over centred balls reduce to one
/// radial integral in any dimension; other cases need `n <= 3`.
pub fn body_integral(w: &Weight, region: &Region, n: usize) -> Result<f64> {
    let base_dim = match region {
        Region::Body(b) => b.dimension(),
        Region::Union(u) => u.base().dimension(),
    };
    if base_dim != n {
        return Err(Error::InvalidInput(format!("region has dimension {base_dim}, expected {n}")));
    }
    match region {
        Region::Body(ConvexBody::Ball { radius, .. }) if w.is_radial() => {
            let e = ray_integral(w, &vec![0.0; n], &unit(n), *radius, n)?;
            Ok(if e.is_infinite() { e } else { sphere_measure(n) * e })
        }
        Region::Body(b) => body_about(w, b, &vec![0.0; n], n),
        Region::Union(u) => {
            let mut total = 0.0;
            for t in u.translations() {
                total += body_about(w, u.base(), t, n)?;
            }
            Ok(total)
        }
    }
}

fn unit(n: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[0] = 1.0;
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polars_in_closed_form() {
        let b = ConvexBody::ball(3, 1.0).unwrap();
        assert_eq!(b.polar(), b);
        let e = ConvexBody::ellipsoid(vec![2.0, 0.5]).unwrap();
        assert_eq!(e.polar(), ConvexBody::ellipsoid(vec![0.5, 2.0]).unwrap());
        let q = ConvexBody::cube(2, 2.0).unwrap();
        assert_eq!(q.polar(), ConvexBody::cross_polytope(vec![2.0, 2.0]).unwrap());
        assert_eq!(q.polar().polar(), q);
    }

    #[test]
    fn support_is_symmetric() {
        let e = ConvexBody::ellipsoid(vec![2.0, 0.5, 1.0]).unwrap();
        let xi = [0.3, -1.2, 0.8];
        let m: Vec<f64> = xi.iter().map(|x| -x).collect();
        assert_eq!(e.support(&xi), e.support(&m));
    }

    #[test]
    fn dilation_guards() {
        let b = ConvexBody::ball(2, 1.0).unwrap();
        assert!(b.dilated_polar(1.5).is_ok());
        assert!(b.dilated_polar(PI / 2.0).is_err());
        assert!(check_radial_dilation(2, 2.3).is_ok());
        assert!(check_radial_dilation(2, 2.5).is_err());
        assert!(radial_dilation_bound(3) > PI - 1e-12);
    }

    #[test]
    fn overlapping_translates_rejected() {
        let b = ConvexBody::ball(2, 1.0).unwrap();
        assert!(TranslatedUnion::new(b.clone(), vec![vec![0.0, 0.0], vec![1.5, 0.0]]).is_err());
        let u = TranslatedUnion::new(b, vec![vec![0.0, 0.0], vec![3.0, 0.0]]).unwrap();
        assert!((u.separation() - 3.0).abs() < 1e-15);
        assert!(u.contains(&[3.5, 0.2]));
    }

    #[test]
    fn integrals() {
        let one = Weight::constant();
        let b3 = ConvexBody::ball(3, 1.0).unwrap();
        let v = body_integral(&one, &b3.clone().into(), 3).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-12);
        let b2 = ConvexBody::ball(2, 1.0).unwrap();
        let v = body_integral(&Weight::power(-1.0), &b2.into(), 2).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-10);
        // c (cube of half-width s)^* is { |x1| + |x2| <= c / s }
        let s = 0.8;
        let c = 1.5;
        let body = ConvexBody::cube(2, s).unwrap().dilated_polar(c).unwrap();
        let v = body_integral(&one, &body.into(), 2).unwrap();
        assert!((v - 2.0 * (c / s).powi(2)).abs() < 1e-9, "{v}");
    }
}
