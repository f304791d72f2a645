use std::f64::consts::PI;

use proptest::prelude::*;

use critrad::geometry::{
    ball_ball_intersection_volume, half_lens_excess, region_ball_intersection_volume, sphere_segment_volume,
    unit_ball_radius, Point3, Region,
};

fn ball(r: f64) -> f64 {
    4.0 / 3.0 * PI * r.powi(3)
}

#[test]
fn half_lens_excess_from_segments() {
    // Front hemisphere of B(x), minus the cap of B(x) beyond the radical
    // plane d/2, minus the slab of B(y) between 0 and d/2.
    let a = |t: f64| sphere_segment_volume(1.0, t).unwrap();
    for i in 1..=9 {
        let d = 0.1 * i as f64;
        let want = a(0.0) - 2.0 * a(-d / 2.0) + a(-d);
        assert!((half_lens_excess(d, 1.0).unwrap() - want).abs() < 1e-13, "d={d}");
        let lens = ball_ball_intersection_volume(1.0, 1.0, d).unwrap();
        assert!((lens - 2.0 * a(-d / 2.0)).abs() < 1e-13);
    }
}

#[test]
fn lens_at_the_unit_ball_boundary() {
    // A radius-0.1 ball centred on the unit-ball boundary: the lens is a
    // thin segment pair; compare with the slab integral of disc areas.
    let r0 = unit_ball_radius();
    let (r, s) = (0.1, r0);
    let exact = ball_ball_intersection_volume(r0, r, s).unwrap();
    let steps = 200_000;
    let h = 2.0 * r / steps as f64;
    let numeric: f64 = (0..steps)
        .map(|i| {
            let z = -r + (i as f64 + 0.5) * h;
            // Slice at distance z along the centre line from the small ball centre.
            let rho_small = (r * r - z * z).max(0.0);
            let rho_big = (r0 * r0 - (s + z).powi(2)).max(0.0);
            PI * rho_small.min(rho_big) * h
        })
        .sum();
    assert!((exact - numeric).abs() < 1e-9, "{exact} vs {numeric}");
}

proptest! {
    #[test]
    fn segment_is_monotone_and_complementary(r in 0.01..3.0f64, u in -1.0..1.0f64, w in -1.0..1.0f64) {
        let (t1, t2) = ((u.min(w)) * r, (u.max(w)) * r);
        let a1 = sphere_segment_volume(r, t1).unwrap();
        let a2 = sphere_segment_volume(r, t2).unwrap();
        prop_assert!(a1 <= a2 + 1e-15 * ball(r));
        let sum = a1 + sphere_segment_volume(r, -t1).unwrap();
        prop_assert!((sum - ball(r)).abs() <= 1e-12 * ball(r));
    }

    #[test]
    fn region_volume_is_bounded_by_ball(x in -0.7..0.7f64, y in -0.7..0.7f64, z in -0.7..0.7f64, r in 0.005..0.4f64) {
        for region in [Region::UnitBall, Region::UnitCube] {
            let p = Point3::new(x, y, z);
            if !region.contains(&p) {
                prop_assert!(region_ball_intersection_volume(&region, &p, r).is_err());
                continue;
            }
            let v = region_ball_intersection_volume(&region, &p, r).unwrap();
            prop_assert!(v > 0.0 && v <= ball(r) * (1.0 + 1e-12));
            // The octant pointing at the cube centre is always inside.
            if region == Region::UnitCube {
                prop_assert!(v >= ball(r) / 8.0 * (1.0 - 1e-9));
            }
        }
    }

    #[test]
    fn region_volume_grows_with_radius(x in -0.5..0.5f64, y in -0.5..0.5f64, r in 0.01..0.3f64, dr in 0.0..0.1f64) {
        for region in [Region::UnitBall, Region::UnitCube] {
            let p = Point3::new(x, y, 0.0);
            if !region.contains(&p) {
                continue;
            }
            let a = region_ball_intersection_volume(&region, &p, r).unwrap();
            let b = region_ball_intersection_volume(&region, &p, r + dr).unwrap();
            prop_assert!(a <= b * (1.0 + 1e-9));
        }
    }
}
