use std::f64::consts::PI;

use pitt_lab::geometry::{body_integral, check_radial_dilation, ConvexBody, Region, TranslatedUnion};
use pitt_lab::weights::Weight;
use proptest::prelude::*;

fn bodies() -> Vec<ConvexBody> {
    vec![
        ConvexBody::ball(2, 1.3).unwrap(),
        ConvexBody::ball(3, 0.7).unwrap(),
        ConvexBody::ellipsoid(vec![2.0, 0.5]).unwrap(),
        ConvexBody::ellipsoid(vec![1.5, 0.4, 3.0]).unwrap(),
        ConvexBody::cuboid(vec![1.0, 2.5]).unwrap(),
        ConvexBody::cube(3, 0.8).unwrap(),
        ConvexBody::cross_polytope(vec![0.5, 2.0]).unwrap(),
        ConvexBody::cross_polytope(vec![1.0, 1.0, 3.0]).unwrap(),
    ]
}

fn direction(n: usize, angles: &[f64]) -> Vec<f64> {
    // a point on S^(n-1) from spherical angles
    match n {
        2 => vec![angles[0].cos(), angles[0].sin()],
        _ => {
            let (s, c) = angles[1].sin_cos();
            vec![s * angles[0].cos(), s * angles[0].sin(), c]
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `sup_{x in A} x . xi` by brute force over boundary points `d / ||d||_A`.
fn sampled_support(body: &ConvexBody, xi: &[f64]) -> f64 {
    let n = body.dimension();
    let mut best: f64 = vertices(body).iter().map(|v| dot(v, xi)).fold(0.0, f64::max);
    if n == 2 {
        for k in 0..20_000 {
            let d = direction(2, &[2.0 * PI * k as f64 / 20_000.0]);
            best = best.max(dot(&d, xi) / body.gauge(&d));
        }
    } else {
        for i in 0..400 {
            for j in 0..=200 {
                let d = direction(3, &[2.0 * PI * i as f64 / 400.0, PI * j as f64 / 200.0]);
                best = best.max(dot(&d, xi) / body.gauge(&d));
            }
        }
    }
    best
}

fn vertices(body: &ConvexBody) -> Vec<Vec<f64>> {
    match body {
        ConvexBody::Box { half_widths } => (0..1usize << half_widths.len())
            .map(|m| {
                half_widths
                    .iter()
                    .enumerate()
                    .map(|(i, s)| if m >> i & 1 == 1 { *s } else { -s })
                    .collect()
            })
            .collect(),
        ConvexBody::CrossPolytope { weights } => {
            let n = weights.len();
            let mut out = Vec::new();
            for (i, w) in weights.iter().enumerate() {
                for sign in [1.0, -1.0] {
                    let mut v = vec![0.0; n];
                    v[i] = sign / w;
                    out.push(v);
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

#[test]
fn bipolar_is_identity() {
    for b in bodies() {
        assert_eq!(b.polar().polar(), b);
        let c = b.scaled(2.5).unwrap().polar();
        let d = b.polar().scaled(0.4).unwrap();
        for k in 0..20 {
            let x = direction(b.dimension(), &[0.3 * k as f64, 0.17 * k as f64]);
            assert!((c.gauge(&x) / d.gauge(&x) - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn support_function_is_the_gauge_of_the_polar() {
    for b in bodies() {
        let n = b.dimension();
        for k in 0..5 {
            let xi = direction(n, &[0.37 + 1.1 * k as f64, 0.2 + 0.6 * k as f64]);
            let xi: Vec<f64> = xi.iter().map(|t| 1.7 * t).collect();
            let h = b.support(&xi);
            assert!((h - b.polar().gauge(&xi)).abs() < 1e-12 * h);
            let sampled = sampled_support(&b, &xi);
            // a sampled sup is a lower bound that converges from below
            assert!(sampled <= h * (1.0 + 1e-12));
            assert!(sampled > h * (1.0 - 2e-3), "{b:?}: {sampled} vs {h}");
        }
    }
}

#[test]
fn mahler_products() {
    // |B||B*| = pi^2 in the plane, 8 for the square and its dual diamond
    let b = ConvexBody::ball(2, 3.0).unwrap();
    assert!((b.volume() * b.polar().volume() - PI * PI).abs() < 1e-12);
    let s = ConvexBody::cuboid(vec![0.3, 4.0]).unwrap();
    assert!((s.volume() * s.polar().volume() - 8.0).abs() < 1e-12);
    let e = ConvexBody::ellipsoid(vec![0.3, 2.0, 5.0]).unwrap();
    let ball3 = 4.0 * PI / 3.0;
    assert!((e.volume() * e.polar().volume() - ball3 * ball3).abs() < 1e-10);
    let c = ConvexBody::cube(3, 1.0).unwrap();
    assert!((c.volume() * c.polar().volume() - 64.0 / 6.0).abs() < 1e-12);
}

#[test]
fn constant_weight_integrates_to_volume() {
    for b in bodies() {
        let n = b.dimension();
        let v = body_integral(&Weight::constant(), &Region::Body(b.clone()), n).unwrap();
        assert!((v / b.volume() - 1.0).abs() < 1e-7, "{b:?}: {v} vs {}", b.volume());
    }
}

#[test]
fn disjoint_translates_add_up() {
    let base = ConvexBody::cube(2, 1.0).unwrap();
    let u = TranslatedUnion::new(base.clone(), vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, -2.5]]).unwrap();
    assert!(u.separation() > 2.0);
    assert!(u.contains(&[3.5, 0.5]) && !u.contains(&[1.5, 0.0]));
    let v = body_integral(&Weight::constant(), &Region::Union(u), 2).unwrap();
    assert!((v - 12.0).abs() < 1e-7);
    assert!(TranslatedUnion::new(base, vec![vec![0.0, 0.0], vec![1.9, 0.0]]).is_err());
}

#[test]
fn radial_weight_on_a_ball_matches_closed_form() {
    // int_{|x| < 2} |x|^(-1/2) dx = 2 pi 2^(3/2) / (3/2) in the plane
    let b = ConvexBody::ball(2, 2.0).unwrap();
    let v = body_integral(&Weight::power(-0.5), &Region::Body(b), 2).unwrap();
    assert!((v - 2.0 * PI * 2f64.powf(1.5) / 1.5).abs() < 1e-8);
    // the same weight over a square, through the ray integrals
    let s = ConvexBody::cube(2, 1.0).unwrap();
    let v = body_integral(&Weight::power(-0.5), &Region::Body(s), 2).unwrap();
    // 8 int_0^(pi/4) int_0^(sec t) r^(1/2) dr dt
    let want = 8.0 * (0..20_000)
        .map(|k| {
            let t = (k as f64 + 0.5) * (PI / 4.0) / 20_000.0;
            (1.0 / t.cos()).powf(1.5) / 1.5
        })
        .sum::<f64>()
        * (PI / 4.0)
        / 20_000.0;
    assert!((v / want - 1.0).abs() < 1e-7, "{v} vs {want}");
}

#[test]
fn dilation_range_for_radial_contexts() {
    assert!(check_radial_dilation(1, PI / 2.0 - 1e-9).is_ok());
    assert!(check_radial_dilation(1, PI / 2.0 + 1e-9).is_err());
    assert!(check_radial_dilation(3, 3.1).is_ok());
    assert!(ConvexBody::ball(2, 1.0).unwrap().dilated_polar(PI / 2.0).is_err());
}

proptest! {
    #[test]
    fn polarity_reverses_inclusion(
        a in prop::collection::vec(0.2f64..3.0, 2),
        grow in prop::collection::vec(1.0f64..2.0, 2),
        th in 0.0f64..(2.0 * PI),
        r in 0.0f64..4.0,
    ) {
        for (small, big) in [
            (ConvexBody::cuboid(a.clone()).unwrap(),
             ConvexBody::cuboid(a.iter().zip(&grow).map(|(x, g)| x * g).collect()).unwrap()),
            (ConvexBody::ellipsoid(a.clone()).unwrap(),
             ConvexBody::ellipsoid(a.iter().zip(&grow).map(|(x, g)| x * g).collect()).unwrap()),
        ] {
            let x = [r * th.cos(), r * th.sin()];
            if small.contains(&x) {
                prop_assert!(big.contains(&x));
            }
            if big.polar().contains(&x) {
                prop_assert!(small.polar().contains(&x));
            }
        }
    }

    #[test]
    fn polar_points_pair_to_at_most_one(
        a in prop::collection::vec(0.2f64..3.0, 3),
        x_dir in prop::collection::vec(-1.0f64..1.0, 3),
        xi_dir in prop::collection::vec(-1.0f64..1.0, 3),
    ) {
        for b in [
            ConvexBody::cuboid(a.clone()).unwrap(),
            ConvexBody::cross_polytope(a.clone()).unwrap(),
            ConvexBody::ellipsoid(a.clone()).unwrap(),
        ] {
            let gx = b.gauge(&x_dir);
            let gxi = b.polar().gauge(&xi_dir);
            prop_assume!(gx > 1e-9 && gxi > 1e-9);
            let x: Vec<f64> = x_dir.iter().map(|t| t / gx).collect();
            let xi: Vec<f64> = xi_dir.iter().map(|t| t / gxi).collect();
            prop_assert!(dot(&x, &xi).abs() <= 1.0 + 1e-12);
        }
    }
}
