use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use critrad::asymptotics::{boundary_layer_integral, critical_radius, psi_integral, xi_from_c};
use critrad::geometry::{region_ball_intersection_volume, Point3};
use critrad::Region;

fn bench_quadrature(c: &mut Criterion) {
    let xi = xi_from_c(Region::UnitBall.boundary_area(), 1, 0.0).unwrap();
    let r = critical_radius(1e6, 1, xi).unwrap();
    c.bench_function("psi_integral/k=1/n=1e6", |b| {
        b.iter(|| psi_integral(&Region::UnitBall, black_box(1e6), r, 1).unwrap())
    });
    c.bench_function("boundary_layer_integral/k=1/n=1e6", |b| {
        b.iter(|| boundary_layer_integral(black_box(1e6), r, 1).unwrap())
    });
}

fn bench_cube_corner(c: &mut Criterion) {
    let corner = Point3::new(0.49, 0.48, 0.47);
    c.bench_function("cube_intersection/corner", |b| {
        b.iter(|| region_ball_intersection_volume(&Region::UnitCube, black_box(&corner), 0.05).unwrap())
    });
}

criterion_group!(numerics, bench_quadrature, bench_cube_corner);
criterion_main!(numerics);
