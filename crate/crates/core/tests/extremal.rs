use std::f64::consts::PI;

use nalgebra::DMatrix;
use pitt_lab::conditions::ExponentConfig;
use pitt_lab::extremal::*;
use pitt_lab::numerics::RadialGrid;
use pitt_lab::transforms::{RadialProfile, TestFunctionFamily};
use pitt_lab::weights::Weight;
use proptest::prelude::*;

fn cfg(n: usize, p: f64, q: f64) -> ExponentConfig {
    ExponentConfig::new(n, p, q).unwrap()
}

fn dense_top_singular_value(op: &L2Operator) -> f64 {
    let m = op.dim();
    DMatrix::from_row_slice(m, m, op.matrix()).singular_values().max()
}

#[test]
fn plancherel_constant_from_power_iteration() {
    let grid = RadialGrid::composite_gauss(8.0, 32, 16).unwrap();
    for n in 1..=3 {
        let e = best_constant_l2(&Weight::constant(), &Weight::constant(), n, &grid).unwrap();
        let expect = (2.0 * PI).powf(n as f64 / 2.0);
        assert!(e.converged);
        assert_eq!(e.label, LOWER_BOUND);
        assert!((e.value / expect - 1.0).abs() < 5e-3, "n={n}: {} vs {expect}", e.value);
    }
}

#[test]
fn power_iteration_never_exceeds_dense_oracle() {
    let grid = RadialGrid::composite_gauss(6.0, 8, 8).unwrap();
    assert_eq!(grid.len(), 64);
    let cases = [
        (Weight::constant(), Weight::constant()),
        (Weight::power(-0.3), Weight::power(0.3)),
        (Weight::piecewise(0.2, -0.4), Weight::shifted_power(1.0)),
    ];
    for n in 1..=3 {
        for (u, v) in &cases {
            let op = L2Operator::new(u, v, n, &grid).unwrap();
            let oracle = dense_top_singular_value(&op);
            let e = best_constant_l2(u, v, n, &grid).unwrap();
            assert!(e.value <= oracle + 1e-6, "n={n}: {} > {oracle}", e.value);
            assert!(e.value > oracle * (1.0 - 1e-3));
        }
    }
}

#[test]
fn power_weights_on_the_relation_are_resolution_stable() {
    let (u, v) = (Weight::power(-0.2), Weight::power(0.2));
    let coarse = best_constant_l2(&u, &v, 1, &RadialGrid::composite_gauss(8.0, 32, 8).unwrap()).unwrap();
    let fine = best_constant_l2(&u, &v, 1, &RadialGrid::composite_gauss(8.0, 64, 8).unwrap()).unwrap();
    assert!((coarse.value / fine.value - 1.0).abs() < 0.01);
}

#[test]
fn off_relation_weights_grow_under_refinement() {
    // v = |x|^-1 rewards spreading f out, so the estimate grows with the grid
    let grids: Vec<RadialGrid> = [2.0, 8.0, 32.0]
        .iter()
        .map(|&r| RadialGrid::composite_gauss(r, (8.0 * r) as usize, 8).unwrap())
        .collect();
    let e = l2_refinement(&Weight::constant(), &Weight::power(-1.0), 1, &grids).unwrap();
    assert!(e.unbounded, "{:?}", e.history);
    let e = l2_refinement(&Weight::constant(), &Weight::constant(), 1, &grids).unwrap();
    assert!(!e.unbounded);
}

#[test]
fn dilation_sweep_is_flat_on_the_relation() {
    let c = cfg(1, 2.0, 2.0);
    let lambdas = [0.5, 1.0, 2.0, 4.0];
    let obj = RatioObjective::pitt(Weight::power(-0.5), Weight::power(0.5), c).unwrap();
    let rows = dilation_sweep(&obj, &RadialProfile::gaussian(), &lambdas).unwrap();
    for r in &rows {
        assert!((r.ratio / rows[0].ratio - 1.0).abs() < 1e-6, "{rows:?}");
    }
    assert!(dilation_exponent(0.5, -0.5, &c).abs() < 1e-15);
}

#[test]
fn dilation_slope_off_the_relation() {
    let c = cfg(1, 2.0, 2.0);
    let (a, b) = (0.6, -0.5);
    let obj = RatioObjective::pitt(Weight::power(b), Weight::power(a), c).unwrap();
    let rows = dilation_sweep(&obj, &RadialProfile::gaussian(), &[0.5, 4.0]).unwrap();
    let slope = (rows[1].ratio / rows[0].ratio).ln() / 8f64.ln();
    let expect = dilation_exponent(a, b, &c);
    assert!((expect - 0.05).abs() < 1e-15);
    assert!((slope - expect).abs() < 1e-3, "{slope}");
}

#[test]
fn ascent_is_monotone_and_bounded_by_plancherel() {
    let c = cfg(1, 2.0, 2.0);
    let obj = RatioObjective::pitt(Weight::constant(), Weight::constant(), c).unwrap();
    let fam = TestFunctionFamily::dyadic(&RadialProfile::gaussian(), -2, 2).unwrap();
    let e = ratio_ascent(&obj, &fam, 40).unwrap();
    assert!(e.history.windows(2).all(|w| w[1] >= w[0]));
    let plancherel = (2.0 * PI).sqrt();
    assert!((e.value / plancherel - 1.0).abs() < 1e-6, "{}", e.value);
}

#[test]
fn ascent_cannot_beat_a_flat_dilation_family_by_much() {
    let c = cfg(1, 2.0, 2.0);
    let obj = RatioObjective::pitt(Weight::power(-0.5), Weight::power(0.5), c).unwrap();
    let fam = TestFunctionFamily::dyadic(&RadialProfile::gaussian(), -1, 1).unwrap();
    let single = obj.evaluate(&RadialProfile::gaussian()).unwrap().ratio;
    let e = ratio_ascent(&obj, &fam, 30).unwrap();
    assert!(e.value >= single * (1.0 - 1e-6));
    assert!(e.value.is_finite());
}

#[test]
fn uncertainty_ascent_starts_at_the_gaussian() {
    let c = cfg(1, 2.0, 2.0);
    let obj = RatioObjective::new(Inequality::Uncertainty, Weight::constant(), Weight::constant(), c).unwrap();
    // ||f||^2 / (||xi f^|| ||x f||) = 2 / sqrt(2 pi) for the Gaussian
    let g = obj.evaluate(&RadialProfile::gaussian()).unwrap().ratio;
    assert!((g - 2.0 / (2.0 * PI).sqrt()).abs() < 1e-9, "{g}");
    let fam = TestFunctionFamily::dilations(&RadialProfile::gaussian(), &[1.0, 1.5]).unwrap();
    let e = ratio_ascent(&obj, &fam, 20).unwrap();
    assert!(e.value >= g * (1.0 - 1e-6));
    assert!(e.value <= g * (1.0 + 1e-6), "Gaussians are extremal: {}", e.value);
}

#[test]
fn restriction_ratio_is_bounded_at_the_tomas_stein_point() {
    let c = cfg(3, 4.0 / 3.0, 2.0);
    let obj = RatioObjective::new(Inequality::Restriction, Weight::constant(), Weight::constant(), c).unwrap();
    let lambdas: Vec<f64> = (-4..=6).map(|k| 2f64.powi(k)).collect();
    let rows = dilation_sweep(&obj, &RadialProfile::gaussian(), &lambdas).unwrap();
    let max = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    assert!(max.is_finite() && max > 0.0);
    // both ends decay, so the maximum is interior
    assert!(rows[0].ratio < 0.1 * max && rows[rows.len() - 1].ratio < 0.1 * max);
}

#[test]
fn shell_weight_ascent_over_bumps_is_finite() {
    let c = cfg(2, 1.25, 1.5);
    let obj = RatioObjective::pitt(Weight::counterexample(2), Weight::constant(), c).unwrap();
    let fam = TestFunctionFamily::shell_bumps(&[1.0, 2.0, 3.0], 0.4).unwrap();
    let e = ratio_ascent(&obj, &fam, 10).unwrap();
    assert!(e.value.is_finite() && e.value > 0.0);
    assert!(e.history.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn witness_round_trips_through_csv() {
    let grid = RadialGrid::composite_gauss(4.0, 4, 4).unwrap();
    let e = best_constant_l2(&Weight::constant(), &Weight::constant(), 2, &grid).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    e.write_witness_csv(&path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("r,f0"));
    assert_eq!(text.lines().count(), 1 + grid.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ratio_is_scale_invariant(c in prop_oneof![-20.0f64..-0.05, 0.05f64..20.0], lambda in 0.3f64..3.0) {
        let obj = RatioObjective::pitt(Weight::power(-0.3), Weight::shifted_power(1.0), cfg(2, 1.5, 2.5)).unwrap();
        let f = RadialProfile::gaussian().dilate(lambda);
        let a = obj.evaluate(&f).unwrap().ratio;
        let b = obj.evaluate(&f.scale(c)).unwrap().ratio;
        prop_assert!((a / b - 1.0).abs() < 1e-10);
    }
}
