//! Regions, points and the ball/region intersection volumes that drive the
//! degree distribution near the boundary.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::{self, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Euclidean distance. Every radius in the crate is computed through this
    /// one function so that critical radii compare exactly against graph
    /// edge tests.
    #[inline]
    pub fn distance(&self, other: &Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Radius of the ball with unit volume, `(3 / 4π)^(1/3)`.
pub fn unit_ball_radius() -> f64 {
    (3.0 / (4.0 * PI)).cbrt()
}

/// Regions centred at the origin. `UnitBall` and `UnitCube` have volume 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Region {
    UnitBall,
    ScaledBall {
        radius: f64,
    },
    /// The cube `[-1/2, 1/2]^3`.
    UnitCube,
}

impl Region {
    /// Ball radius for the ball kinds, `None` for the cube.
    pub fn ball_radius(&self) -> Option<f64> {
        match *self {
            Region::UnitBall => Some(unit_ball_radius()),
            Region::ScaledBall { radius } => Some(radius),
            Region::UnitCube => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Region::ScaledBall { radius } if !(radius > 0.0 && radius.is_finite()) => Err(
                Error::InvalidConfig(format!("ball radius must be positive, got {radius}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn volume(&self) -> f64 {
        match *self {
            Region::UnitBall | Region::UnitCube => 1.0,
            Region::ScaledBall { radius } => 4.0 / 3.0 * PI * radius.powi(3),
        }
    }

    pub fn boundary_area(&self) -> f64 {
        match *self {
            Region::UnitBall => (36.0 * PI).cbrt(),
            Region::ScaledBall { radius } => 4.0 * PI * radius * radius,
            Region::UnitCube => 6.0,
        }
    }

    /// Half the supremum over the boundary of `|κ_max| + |κ_min|`. For a ball
    /// of radius R both principal curvatures are 1/R.
    pub fn curvature_constant(&self) -> Result<f64> {
        match self.ball_radius() {
            Some(radius) => Ok(1.0 / radius),
            None => Err(Error::UnsupportedRegion(
                "curvature constant needs a C2 boundary; the cube has edges".into(),
            )),
        }
    }

    /// Half-width of the axis-aligned bounding box.
    pub fn half_width(&self) -> f64 {
        self.ball_radius().unwrap_or(0.5)
    }

    pub fn contains(&self, p: &Point3) -> bool {
        if !p.is_finite() {
            return false;
        }
        match self.ball_radius() {
            Some(radius) => p.norm() <= radius * (1.0 + 1e-12),
            None => p.coords().iter().all(|c| c.abs() <= 0.5),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Region::UnitBall => "unit-ball".into(),
            Region::ScaledBall { radius } => format!("scaled-ball(R={radius})"),
            Region::UnitCube => "unit-cube".into(),
        }
    }
}

impl std::str::FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit-ball" | "ball" => Ok(Region::UnitBall),
            "unit-cube" | "cube" => Ok(Region::UnitCube),
            other => Err(Error::InvalidConfig(format!(
                "unknown region '{other}' (expected unit-ball or unit-cube)"
            ))),
        }
    }
}

/// Volume of the part of a radius-`r` ball on the side `x1 <= t` of a plane
/// at signed distance `t` from its centre: `π/3 (2r³ + 3r²t − t³)`.
pub fn sphere_segment_volume(r: f64, t: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain(format!("segment radius must be positive, got {r}")));
    }
    if !(t.abs() <= r) {
        return Err(domain(format!("plane offset {t} outside [-{r}, {r}]")));
    }
    Ok(PI / 3.0 * (2.0 * r * r * r + 3.0 * r * r * t - t * t * t))
}

/// Volume of the hemisphere of `B(x, r)` facing `y` that is not covered by
/// `B(y, r)`, for centres at distance `d < r`. Equals `π d³ / 4`.
pub fn half_lens_excess(d: f64, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain(format!("radius must be positive, got {r}")));
    }
    if !(d >= 0.0 && d < r) {
        return Err(domain(format!(
            "centre distance {d} must satisfy 0 <= d < r = {r}"
        )));
    }
    Ok(0.25 * PI * d * d * d)
}

/// Volume of `B(0, big) ∩ B(s·e, small)`.
pub fn ball_ball_intersection_volume(big: f64, small: f64, s: f64) -> Result<f64> {
    if !(big > 0.0 && small > 0.0 && big.is_finite() && small.is_finite()) {
        return Err(domain(format!(
            "ball radii must be positive, got {big} and {small}"
        )));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(domain(format!("centre distance must be nonnegative, got {s}")));
    }
    if s >= big + small {
        return Ok(0.0);
    }
    if s <= (big - small).abs() {
        return Ok(4.0 / 3.0 * PI * big.min(small).powi(3));
    }
    let (r1, r2) = (big, small);
    let lead = (r1 + r2 - s).powi(2);
    let tail = s * s + 2.0 * s * r2 - 3.0 * r2 * r2 + 2.0 * s * r1 + 6.0 * r2 * r1 - 3.0 * r1 * r1;
    Ok(PI * lead * tail / (12.0 * s))
}

/// Signed distance from a point at distance `s` from the centre of a ball
/// region of radius `big` to the plane of the circle `∂B(x, r) ∩ ∂Ω`.
///
/// Positive when the plane lies beyond `x` as seen from the region centre, so
/// `sphere_segment_volume(r, t)` is the part of `B(x, r)` on the centre side
/// of the plane and bounds `|B(x, r) ∩ Ω|` from below.
pub fn ball_region_plane_offset(big: f64, s: f64, r: f64) -> Result<f64> {
    if !(big > 0.0 && r > 0.0) {
        return Err(domain("radii must be positive"));
    }
    if !(s > (big - r).abs() && s < big + r) {
        return Err(domain(format!(
            "spheres of radii {big} and {r} at distance {s} do not meet in a circle"
        )));
    }
    if s > big * (1.0 + 1e-12) {
        return Err(domain(format!(
            "point at distance {s} lies outside the ball of radius {big}"
        )));
    }
    Ok((big * big - r * r - s * s) / (2.0 * s))
}

/// An intersection volume with its absolute error bound (zero when exact).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate {
    pub value: f64,
    pub abs_error: f64,
}

impl VolumeEstimate {
    fn exact(value: f64) -> Self {
        Self {
            value,
            abs_error: 0.0,
        }
    }
}

/// `|B(x, r) ∩ Ω|` with an error bound.
///
/// Balls use the closed-form lens. For the cube, a ball clipped by at most one
/// face is a sphere segment; otherwise the volume is integrated slice by slice
/// with the exact disk/rectangle area.
pub fn region_ball_intersection(region: &Region, x: &Point3, r: f64) -> Result<VolumeEstimate> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain(format!("radius must be positive, got {r}")));
    }
    if !region.contains(x) {
        return Err(Error::OutsideRegion {
            x: x.x,
            y: x.y,
            z: x.z,
        });
    }
    if let Some(big) = region.ball_radius() {
        return ball_ball_intersection_volume(big, r, x.norm()).map(VolumeEstimate::exact);
    }

    let c = x.coords();
    let mut clipped = Vec::with_capacity(6);
    for &ci in &c {
        for gap in [0.5 - ci, 0.5 + ci] {
            if gap < r {
                clipped.push(gap);
            }
        }
    }
    match clipped.as_slice() {
        [] => Ok(VolumeEstimate::exact(4.0 / 3.0 * PI * r.powi(3))),
        [gap] => sphere_segment_volume(r, *gap).map(VolumeEstimate::exact),
        _ => cube_slices(c, r),
    }
}

/// Value-only form of [`region_ball_intersection`].
pub fn region_ball_intersection_volume(region: &Region, x: &Point3, r: f64) -> Result<f64> {
    region_ball_intersection(region, x, r).map(|v| v.value)
}

fn cube_slices(c: [f64; 3], r: f64) -> Result<VolumeEstimate> {
    let [cx, cy, cz] = c;
    let (x0, x1) = (-0.5 - cx, 0.5 - cx);
    let (y0, y1) = (-0.5 - cy, 0.5 - cy);
    let lo = (cz - r).max(-0.5);
    let hi = (cz + r).min(0.5);

    // Slice-area kinks: the disk radius passing a face line or a corner.
    let mut kinks = Vec::new();
    let mut at_radius = |q: f64| {
        if q < r {
            let dz = (r * r - q * q).sqrt();
            kinks.push(cz - dz);
            kinks.push(cz + dz);
        }
    };
    for q in [x0.abs(), x1.abs(), y0.abs(), y1.abs()] {
        at_radius(q);
    }
    for qx in [x0, x1] {
        for qy in [y0, y1] {
            at_radius(qx.hypot(qy));
        }
    }

    let slice = |z: f64| {
        let rho2 = r * r - (z - cz) * (z - cz);
        if rho2 <= 0.0 {
            0.0
        } else {
            disk_rect_area(rho2.sqrt(), x0, x1, y0, y1)
        }
    };
    let ball = 4.0 / 3.0 * PI * r.powi(3);
    let q = quadrature::integrate(
        slice,
        lo,
        hi,
        &kinks,
        Tolerance {
            abs: 1e-9 * ball,
            rel: 1e-12,
        },
    )?;
    Ok(VolumeEstimate {
        value: q.value,
        abs_error: q.abs_error,
    })
}

/// Area of the disk of radius `rho` centred at the origin intersected with
/// the rectangle `[x0, x1] × [y0, y1]`.
pub(crate) fn disk_rect_area(rho: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let area = quadrant_area(rho, x1, y1) - quadrant_area(rho, x0, y1) - quadrant_area(rho, x1, y0)
        + quadrant_area(rho, x0, y0);
    area.max(0.0)
}

/// Area of the disk of radius `rho` within `{u <= x, v <= y}`.
fn quadrant_area(rho: f64, x: f64, y: f64) -> f64 {
    if rho <= 0.0 || x <= -rho || y <= -rho {
        return 0.0;
    }
    // Antiderivative of the half-chord sqrt(rho² − u²).
    let chord = |u: f64| {
        let u = u.clamp(-rho, rho);
        0.5 * (u * (rho * rho - u * u).max(0.0).sqrt() + rho * rho * (u / rho).asin())
    };
    let xs = x.min(rho);
    if y >= rho {
        return 2.0 * (chord(xs) - chord(-rho));
    }
    let w = (rho * rho - y * y).sqrt();
    // |u| >= w: the whole chord lies below y (y > 0) or above it (y < 0).
    let outer = |a: f64, b: f64| {
        if b <= a || y < 0.0 {
            0.0
        } else {
            2.0 * (chord(b) - chord(a))
        }
    };
    let inner = |a: f64, b: f64| {
        if b <= a {
            0.0
        } else {
            y * (b - a) + chord(b) - chord(a)
        }
    };
    outer(-rho, xs.min(-w)) + inner(-w, xs.min(w)) + outer(w, xs)
}
