use super::gauss::gauss_legendre;
use super::quadrature::Tolerance;
use super::sphere::sphere_measure;
use super::integrate_half_line;
use crate::error::{Error, Result};
use crate::transforms::RadialProfile;
use crate::weights::{GridWeight, Weight};

/// Values larger than this during refinement are read as divergence.
const OVERFLOW_GUARD: f64 = 1e150;

/// `|| v^(1/p) f ||_p` on `R^n` for a radial `f`, i.e.
/// `(omega_{n-1} int |f0|^p v0 r^(n-1) dr)^(1/p)` for radial weights.
///
/// Divergent integrals give `+inf` rather than an error. For `p = inf` the
/// weight drops out and the supremum of `|f0|` over a dense node set is
/// returned.
pub fn weighted_lp_norm(profile: &RadialProfile, weight: &Weight, p: f64, n: usize) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidInput(format!("need p >= 1, got {p}")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    if p.is_infinite() {
        return Ok(sup_over_nodes(profile));
    }
    let integral = match weight {
        Weight::TabulatedGrid(g) => grid_integral(profile, g, p, n)?,
        Weight::Counterexample { n: wn } if *wn == n => counterexample_integral(profile, n, p)?,
        _ => radial_integral(profile, weight, p, n)?,
    };
    Ok(integral.max(0.0).powf(1.0 / p))
}

/// Unweighted `|| f ||_p` on `R^n`.
pub fn lp_norm_profile(profile: &RadialProfile, p: f64, n: usize) -> Result<f64> {
    weighted_lp_norm(profile, &Weight::constant(), p, n)
}

fn divergence_to_inf(r: Result<f64>) -> Result<f64> {
    match r {
        Err(Error::NotIntegrable(_)) => Ok(f64::INFINITY),
        Err(Error::NonConvergence { value, .. }) if value.abs() > OVERFLOW_GUARD => Ok(f64::INFINITY),
        Ok(v) if v > OVERFLOW_GUARD || v.is_infinite() => Ok(f64::INFINITY),
        other => other,
    }
}

fn radial_integral(profile: &RadialProfile, weight: &Weight, p: f64, n: usize) -> Result<f64> {
    let (mut breaks, tail) = profile.integration_plan();
    let reach = profile.truncation_radius().unwrap_or(64.0);
    breaks.extend(weight.breakpoints(reach));
    let nm1 = n as i32 - 1;
    let integrand = |r: f64| {
        let f = profile.eval(r).abs();
        if f == 0.0 {
            return 0.0;
        }
        f.powf(p) * weight.radial(r) * r.powi(nm1)
    };
    let tol = Tolerance::new(1e-15, 1e-12);
    divergence_to_inf(
        integrate_half_line(integrand, &breaks, tail, &tol).map(|e| e.value * sphere_measure(n)),
    )
}

/// Shell by shell: `u0 r^(n-1) = k^n` on `A_k`.
fn counterexample_integral(profile: &RadialProfile, n: usize, p: f64) -> Result<f64> {
    let Some(r) = profile.truncation_radius() else {
        return Err(Error::Unsupported(
            "the counterexample weight needs a profile with a finite truncation radius".into(),
        ));
    };
    let u = Weight::counterexample(n);
    let b = u.breakpoints(r + 2.0);
    let tol = Tolerance::new(1e-15, 1e-12);
    let mut total = 0.0;
    for pair in b.chunks(2) {
        if pair.len() < 2 || pair[0] > r {
            break;
        }
        let k = pair[0];
        let e = super::integrate(|t: f64| profile.eval(t).abs().powf(p), pair[0], pair[1], &tol)?;
        total += k.powi(n as i32) * e.value;
    }
    Ok(total * sphere_measure(n))
}

fn grid_integral(profile: &RadialProfile, g: &GridWeight, p: f64, n: usize) -> Result<f64> {
    if g.dimension() != n {
        return Err(Error::InvalidInput(format!(
            "grid weight has dimension {}, profile used in dimension {n}",
            g.dimension()
        )));
    }
    let (x, w) = gauss_legendre(6);
    let h = g.spacing();
    let mut total = 0.0;
    for (i, &v) in g.values().iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let corner = g.cell_corner(i);
        let mut idx = vec![0usize; n];
        let mut cell = 0.0;
        loop {
            let mut r2 = 0.0;
            let mut wt = 1.0;
            for d in 0..n {
                let c = corner[d] + 0.5 * h * (1.0 + x[idx[d]]);
                r2 += c * c;
                wt *= 0.5 * h * w[idx[d]];
            }
            cell += wt * profile.eval(r2.sqrt()).abs().powf(p);
            let mut d = 0;
            while d < n {
                idx[d] += 1;
                if idx[d] < x.len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == n {
                break;
            }
        }
        total += v * cell;
    }
    Ok(total)
}

fn sup_over_nodes(profile: &RadialProfile) -> f64 {
    let r_max = profile.truncation_radius().unwrap_or(64.0);
    let m = 4096;
    let mut best = profile.eval(0.0).abs();
    for k in 1..=m {
        best = best.max(profile.eval(r_max * k as f64 / m as f64).abs());
    }
    for &b in profile.breaks() {
        for r in [b * (1.0 - 1e-12), b, b * (1.0 + 1e-12)] {
            best = best.max(profile.eval(r).abs());
        }
    }
    best
}
