mod common;

use common::{bessel_j_exact, bisect_exact, log_grid, normalized_series_exact};
use pitt_lab::bessel::{bessel_j, normalized_j, zeros, BesselOrder};

#[test]
fn bessel_j_matches_big_integer_series() {
    let grid = log_grid(1e-6, 2000.0, 1000);
    for twice in [-1i64, 0, 1, 2, 3] {
        let order = BesselOrder::new(twice as f64 / 2.0).unwrap();
        for &t in &grid {
            let want = bessel_j_exact(twice, t);
            let got = bessel_j(order, t).unwrap();
            // Near zeros the relative error is ill-conditioned; measure
            // against the local envelope sqrt(2 / (pi t)) as well.
            let envelope = (2.0 / (std::f64::consts::PI * t)).sqrt().min(1.0);
            let err = (got - want).abs() / want.abs().max(1e-3 * envelope);
            assert!(err < 1e-10, "alpha={} t={t}: {got} vs {want}", twice as f64 / 2.0);
        }
    }
}

#[test]
fn normalized_kernel_matches_series_for_generic_order() {
    // Non-tabulated orders: compare the normalized function directly.
    for twice in [5i64, 8, 13] {
        let order = BesselOrder::new(twice as f64 / 2.0).unwrap();
        for &t in &[0.1, 3.0, 11.0, 24.0, 26.0, 40.0, 75.0] {
            let want = normalized_series_exact(twice, t);
            let got = normalized_j(order, t).unwrap();
            assert!((got - want).abs() < 1e-11 * want.abs().max(1e-6), "{twice} {t}");
        }
    }
}

#[test]
fn zeros_match_bisection_of_the_exact_series() {
    for twice in [0i64, 1, 2, 4] {
        let order = BesselOrder::new(twice as f64 / 2.0).unwrap();
        let z = zeros(order, 6).unwrap();
        for q in z {
            let want = bisect_exact(twice, q - 0.01, q + 0.01);
            assert!((q - want).abs() < 1e-12 * want, "{q} vs {want}");
        }
    }
}
