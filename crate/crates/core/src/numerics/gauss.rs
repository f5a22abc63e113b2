//! Fixed-order Gauss–Legendre and Clenshaw–Curtis rules on `[-1, 1]`.

use std::f64::consts::PI;

/// Nodes (increasing) and weights of the `m`-point Gauss–Legendre rule.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1, "rule needs at least one node");
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_m.
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    if m % 2 == 1 {
        x[m / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(m: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let d = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Nodes (increasing) and weights of the Clenshaw–Curtis rule with `m + 1` points.
pub fn clenshaw_curtis(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1, "rule needs at least two nodes");
    let mf = m as f64;
    let x: Vec<f64> = (0..=m).map(|k| -(PI * k as f64 / mf).cos()).collect();
    let mut w = vec![0.0; m + 1];
    for (k, wk) in w.iter_mut().enumerate() {
        let theta = PI * k as f64 / mf;
        let mut s = 0.0;
        for j in 1..=m / 2 {
            let b = if 2 * j == m { 1.0 } else { 2.0 };
            s += b / (4.0 * (j * j) as f64 - 1.0) * (2.0 * j as f64 * theta).cos();
        }
        let c = if k == 0 || k == m { 1.0 } else { 2.0 };
        *wk = c / mf * (1.0 - s);
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_high_degree_exactly() {
        for m in [1, 2, 5, 16, 64, 257] {
            let (x, w) = gauss_legendre(m);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "m={m}");
            let deg = 2 * m - 2;
            let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
            assert!((s - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "m={m}");
        }
    }

    #[test]
    fn clenshaw_curtis_moments() {
        let (x, w) = clenshaw_curtis(16);
        for deg in [0, 2, 8, 16] {
            let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg)).sum();
            assert!((s - 2.0 / (deg as f64 + 1.0)).abs() < 1e-14);
        }
    }
}
