use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use critrad::asymptotics::{critical_radius, poisson_pmf, psi_integral, xi_from_c};
use critrad::geometry::{
    ball_region_plane_offset, region_ball_intersection_volume, sphere_segment_volume, unit_ball_radius,
    Region,
};
use critrad::sampling::uniform_point;

fn unit_ball_radius_at(n: f64, k: u32, c: f64) -> f64 {
    let xi = xi_from_c(Region::UnitBall.boundary_area(), k, c).unwrap();
    critical_radius(n, k, xi).unwrap()
}

/// Integral of n ψ over the unit ball with V(x) replaced by `volume(depth)`,
/// integrated radially with a midpoint rule fine enough to resolve the layer.
fn radial_integral(n: f64, r: f64, k: u32, volume: impl Fn(f64) -> f64) -> f64 {
    let r0 = unit_ball_radius();
    let steps = 200_000;
    let h = r / steps as f64;
    let layer: f64 = (0..steps)
        .map(|i| {
            let depth = (i as f64 + 0.5) * h;
            let s = r0 - depth;
            4.0 * PI * s * s * n * poisson_pmf(n * volume(depth), k) * h
        })
        .sum();
    let inner = (4.0 / 3.0) * PI * (r0 - r).powi(3);
    layer + inner * n * poisson_pmf(n * 4.0 / 3.0 * PI * r.powi(3), k)
}

#[test]
fn psi_integral_bracketed_by_segment_bounds() {
    // With k = 0, ψ decreases in V, so the segment lower/upper volume bounds
    // give upper/lower bounds on the integral.
    let r0 = unit_ball_radius();
    let g = Region::UnitBall.curvature_constant().unwrap();
    for n in [1e4, 1e5, 1e6] {
        let r = unit_ball_radius_at(n, 0, 0.0);
        let segment = |depth: f64| {
            let t = ball_region_plane_offset(r0, r0 - depth, r).unwrap();
            sphere_segment_volume(r, t).unwrap()
        };
        let upper = radial_integral(n, r, 0, segment);
        let lower = radial_integral(n, r, 0, |d| segment(d) + 10.0 * g * PI * r.powi(4));
        let got = psi_integral(&Region::UnitBall, n, r, 0).unwrap().value;
        assert!(lower <= got && got <= upper, "n={n}: {lower} <= {got} <= {upper}");
    }
}

#[test]
fn psi_integral_matches_monte_carlo() {
    let region = Region::UnitBall;
    for (n, k) in [(1e4, 0u32), (1e5, 1)] {
        let r = unit_ball_radius_at(n, k, 0.0);
        let samples = 10_000_000usize;
        let chunks = 160usize;
        let per = samples / chunks;
        let (sum, sum_sq) = (0..chunks as u64)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(0xA5A5 + c);
                let mut acc = (0.0, 0.0);
                for _ in 0..per {
                    let x = uniform_point(&region, &mut rng);
                    let v = region_ball_intersection_volume(&region, &x, r).unwrap();
                    let f = n * poisson_pmf(n * v, k);
                    acc.0 += f;
                    acc.1 += f * f;
                }
                acc
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let m = (per * chunks) as f64;
        let mean = sum / m;
        let se = ((sum_sq / m - mean * mean) / m).sqrt();
        // Region volume is 1, so the mean is the integral.
        let quad = psi_integral(&region, n, r, k).unwrap().value;
        assert!(
            (quad - mean).abs() <= 3.0 * se,
            "n={n} k={k}: quad {quad} mc {mean} se {se}"
        );
    }
}

#[test]
fn psi_integral_deviation_shrinks_with_n() {
    for k in 0..=2u32 {
        let devs: Vec<f64> = [1e4, 1e5, 1e6, 1e7, 1e9]
            .iter()
            .map(|&n| {
                (psi_integral(&Region::UnitBall, n, unit_ball_radius_at(n, k, 0.5), k)
                    .unwrap()
                    .value
                    - (-0.5f64).exp())
                .abs()
            })
            .collect();
        assert!(devs.windows(2).all(|w| w[1] < w[0]), "k={k}: {devs:?}");
    }
}
