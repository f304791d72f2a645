//! Fast property checks bundled with the library, run by `critrad selftest`.
//! Each check is a scaled-down version of a test in the test suites.

use std::f64::consts::PI;

use crate::asymptotics::{boundary_mass, c_from_xi, xi_from_c};
use crate::critical::{connectivity_radius, min_degree_radius, mst_longest_edge};
use crate::geometry::{
    ball_ball_intersection_volume, ball_region_plane_offset, region_ball_intersection_volume,
    sphere_segment_volume, unit_ball_radius, Point3, Region,
};
use crate::rgg::build_graph;
use crate::sampling::{sample, SampleMode, SampleSpec};

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: f64, limit: f64) -> Check {
    Check {
        name,
        passed: worst <= limit,
        detail: format!("worst {worst:.3e} (limit {limit:.1e})"),
    }
}

fn xi_round_trip() -> Check {
    let mut worst: f64 = 0.0;
    for k in 0..=5 {
        for i in 0..=24 {
            let c = -3.0 + 0.25 * i as f64;
            for area in [0.5, 2.0, 6.0, 10.0] {
                let xi = xi_from_c(area, k, c).unwrap();
                worst = worst.max((c_from_xi(area, k, xi).unwrap() - c).abs());
                worst = worst.max((boundary_mass(area, k, xi) / (-c).exp() - 1.0).abs());
            }
        }
    }
    check("xi/c round trip and residual", worst, 1e-12)
}

fn segment_derivative() -> Check {
    let r = 0.7;
    let mut worst: f64 = 0.0;
    for i in -9..=9 {
        let t = 0.1 * i as f64 * r;
        let h = 1e-5 * r;
        let fd =
            (sphere_segment_volume(r, t + h).unwrap() - sphere_segment_volume(r, t - h).unwrap()) / (2.0 * h);
        let exact = PI * (r * r - t * t);
        worst = worst.max((fd / exact - 1.0).abs());
    }
    check("segment derivative vs finite differences", worst, 1e-6)
}

fn lens_consistency() -> Check {
    let r = 0.3;
    let mut worst: f64 = 0.0;
    for i in 0..=20 {
        let d = 2.0 * r * i as f64 / 20.0;
        let lens = ball_ball_intersection_volume(r, r, d).unwrap();
        let caps = 2.0 * sphere_segment_volume(r, -d / 2.0).unwrap();
        worst = worst.max((lens - caps).abs());
    }
    check("equal-ball lens equals two caps", worst, 1e-10)
}

fn boundary_bounds() -> Check {
    let big = unit_ball_radius();
    let g = Region::UnitBall.curvature_constant().unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let r = 0.01 + 0.04 * i as f64 / 9.0;
        for j in 1..10 {
            let depth = (g + 1.0) * r * r + (r - (g + 1.0) * r * r) * j as f64 / 10.0;
            let s = big - depth;
            let t = ball_region_plane_offset(big, s, r).unwrap();
            let lower = sphere_segment_volume(r, t).unwrap();
            let v = region_ball_intersection_volume(&Region::UnitBall, &Point3::new(s, 0.0, 0.0), r).unwrap();
            let slack = 10.0 * g * PI * r.powi(4);
            worst = worst.max(lower - v).max(v - lower - slack);
        }
    }
    check("segment bounds on the boundary layer", worst, 0.0)
}

fn mst_identity() -> Check {
    let mut mismatches = 0.0;
    for trial in 0..10 {
        let spec = SampleSpec {
            region: Region::UnitBall,
            mode: SampleMode::Uniform { n: 80 },
            seed: 17,
            trial_index: trial,
        };
        let pts = sample(&spec).unwrap().points;
        if mst_longest_edge(&pts).unwrap() != connectivity_radius(&pts, 1).unwrap() {
            mismatches += 1.0;
        }
        if min_degree_radius(&pts, 2).unwrap() > connectivity_radius(&pts, 2).unwrap() {
            mismatches += 1.0;
        }
    }
    check("MST edge equals connectivity radius", mismatches, 0.0)
}

fn grid_graph() -> Check {
    let spec = SampleSpec {
        region: Region::UnitCube,
        mode: SampleMode::Uniform { n: 150 },
        seed: 3,
        trial_index: 0,
    };
    let pts = sample(&spec).unwrap().points;
    let mut mismatches = 0.0;
    for r in [0.05, 0.15, 0.4] {
        let g = build_graph(&pts, r).unwrap();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if g.has_edge(i, j) != (pts[i].distance(&pts[j]) <= r) {
                    mismatches += 1.0;
                }
            }
        }
    }
    check("grid graph equals brute force", mismatches, 0.0)
}

pub fn run_all() -> Vec<Check> {
    vec![
        xi_round_trip(),
        segment_derivative(),
        lens_consistency(),
        boundary_bounds(),
        mst_identity(),
        grid_graph(),
    ]
}
