//! Closed-form critical radius, the ξ ↔ c relation, the limit law and the
//! integrals whose limits pin the constants down.

use std::f64::consts::PI;

use libm::lgamma as ln_gamma;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::{
    ball_ball_intersection_volume, region_ball_intersection_volume, sphere_segment_volume, Point3, Region,
};
use crate::quadrature::{self, Quadrature, Tolerance};

/// Relative tolerance of [`psi_integral`].
pub const PSI_INTEGRAL_RTOL: f64 = 1e-9;
/// Relative tolerance of [`boundary_layer_integral`].
pub const BOUNDARY_LAYER_RTOL: f64 = 1e-10;

/// `ln k!`, exact for 0 and 1 and through log-gamma above.
pub fn ln_factorial(k: u32) -> f64 {
    match k {
        0 | 1 => 0.0,
        _ => ln_gamma(k as f64 + 1.0),
    }
}

fn check_area(area: f64) -> Result<()> {
    if area > 0.0 && area.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("boundary area must be positive, got {area}")))
    }
}

/// ξ for which the expected number of boundary vertices of degree `k`
/// tends to `e^{-c}`:
/// `ξ = 3/2 (c + ln A + k ln(2/3) − ln k! − ln(π)/3)`.
pub fn xi_from_c(area: f64, k: u32, c: f64) -> Result<f64> {
    check_area(area)?;
    Ok(1.5 * (c + area.ln() + k as f64 * (2.0f64 / 3.0).ln() - ln_factorial(k) - PI.ln() / 3.0))
}

/// Inverse of [`xi_from_c`].
pub fn c_from_xi(area: f64, k: u32, xi: f64) -> Result<f64> {
    check_area(area)?;
    Ok(-area.ln() - k as f64 * (2.0f64 / 3.0).ln() + ln_factorial(k) + 2.0 * xi / 3.0 + PI.ln() / 3.0)
}

/// Left side of the defining equation for ξ,
/// `A e^{-2ξ/3} π^{-1/3} (2/3)^k / k!`; equals `e^{-c}` at the solution.
pub fn boundary_mass(area: f64, k: u32, xi: f64) -> f64 {
    area * boundary_layer_limit(k, xi)
}

/// `log n + (3k/2 − 1) log log n + ξ`, which equals `π n r_n³`.
pub fn radius_numerator(n: f64, k: u32, xi: f64) -> Result<f64> {
    if !(n >= 3.0 && n.is_finite()) {
        return Err(domain(format!(
            "n must be at least 3 so that log log n > 0, got {n}"
        )));
    }
    Ok(n.ln() + (1.5 * k as f64 - 1.0) * n.ln().ln() + xi)
}

/// `r_n = ((log n + (3k/2 − 1) log log n + ξ) / (π n))^(1/3)`.
pub fn critical_radius(n: f64, k: u32, xi: f64) -> Result<f64> {
    let num = radius_numerator(n, k, xi)?;
    if !(num > 0.0) {
        return Err(domain(format!(
            "radius numerator log n + (3k/2 - 1) log log n + xi = {num} must be positive"
        )));
    }
    Ok((num / (PI * n)).cbrt())
}

/// `exp(−e^{−c})`.
pub fn limit_probability(c: f64) -> f64 {
    (-(-c).exp()).exp()
}

/// Parameters tying `c`, ξ and the radius together for one region and order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticParams {
    pub n: f64,
    pub k: u32,
    pub c: f64,
    pub xi: f64,
    pub area: f64,
}

impl AsymptoticParams {
    pub fn from_c(area: f64, n: f64, k: u32, c: f64) -> Result<Self> {
        Ok(Self {
            n,
            k,
            c,
            xi: xi_from_c(area, k, c)?,
            area,
        })
    }

    pub fn for_region(region: &Region, n: f64, k: u32, c: f64) -> Result<Self> {
        Self::from_c(region.boundary_area(), n, k, c)
    }

    pub fn radius(&self) -> Result<f64> {
        critical_radius(self.n, self.k, self.xi)
    }

    pub fn limit_probability(&self) -> f64 {
        limit_probability(self.c)
    }
}

/// Poisson probability `m^k e^{-m} / k!`, evaluated in log space.
pub fn poisson_pmf(mean: f64, k: u32) -> f64 {
    if mean <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * mean.ln() - mean - ln_factorial(k)).exp()
}

/// Probability that a Poisson point at `x` has exactly `k` neighbours:
/// the Poisson pmf at mean `n |B(x, r) ∩ Ω|`.
pub fn psi(region: &Region, x: &Point3, n: f64, r: f64, k: u32) -> Result<f64> {
    if !(n >= 0.0 && n.is_finite()) {
        return Err(domain(format!("intensity must be nonnegative, got {n}")));
    }
    let v = region_ball_intersection_volume(region, x, r)?;
    Ok(poisson_pmf(n * v, k))
}

/// `n ∫_Ω ψ dx` for a ball region, reduced to a radial integral.
///
/// Panels are split at the onset of the boundary layer `R − r` and at
/// `R − (G + 1) r²`, inside which the ball meets the boundary at scale `r²`.
pub fn psi_integral(region: &Region, n: f64, r: f64, k: u32) -> Result<Quadrature> {
    let big = region
        .ball_radius()
        .ok_or_else(|| Error::UnsupportedRegion("the radial reduction needs a ball region".into()))?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain(format!("radius must be positive, got {r}")));
    }
    if !(n > 0.0 && n.is_finite()) {
        return Err(domain(format!("n must be positive, got {n}")));
    }
    let g = region.curvature_constant()?;
    let integrand = |s: f64| {
        // Parameters are validated above; the lens cannot fail here.
        let v = ball_ball_intersection_volume(big, r, s).unwrap_or(0.0);
        n * poisson_pmf(n * v, k) * 4.0 * PI * s * s
    };
    let cuts = [big - r, big - (g + 1.0) * r * r];
    quadrature::integrate(integrand, 0.0, big, &cuts, Tolerance::relative(PSI_INTEGRAL_RTOL))
}

/// `n ∫_0^{r/2} (n a(t))^k e^{−n a(t)} / k! dt` with `a` the sphere segment.
pub fn boundary_layer_integral(n: f64, r: f64, k: u32) -> Result<Quadrature> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain(format!("radius must be positive, got {r}")));
    }
    if !(n > 0.0 && n.is_finite()) {
        return Err(domain(format!("n must be positive, got {n}")));
    }
    let integrand = |t: f64| n * poisson_pmf(n * sphere_segment_volume(r, t).unwrap_or(0.0), k);
    quadrature::integrate(
        integrand,
        0.0,
        0.5 * r,
        &[],
        Tolerance::relative(BOUNDARY_LAYER_RTOL),
    )
}

/// Limit of [`boundary_layer_integral`] along `r_n`:
/// `e^{−2ξ/3} π^{−1/3} (2/3)^k / k!`.
pub fn boundary_layer_limit(k: u32, xi: f64) -> f64 {
    (-2.0 * xi / 3.0 - PI.ln() / 3.0 + k as f64 * (2.0f64 / 3.0).ln() - ln_factorial(k)).exp()
}

/// Volume of the unit ball in `d` dimensions, `π^{d/2} / Γ(d/2 + 1)`.
pub fn unit_ball_volume(d: u32) -> f64 {
    let half = d as f64 / 2.0;
    (half * PI.ln() - ln_gamma(half + 1.0)).exp()
}

fn check_dimension(d: u32) -> Result<()> {
    if d >= 3 {
        Ok(())
    } else {
        Err(domain(format!("dimension must be at least 3, got {d}")))
    }
}

/// `d / (2(d − 1)) · V_d(1)`: the leading volume constant of the
/// boundary-layer scaling (π when `d = 3`).
fn general_d_scale(d: u32) -> f64 {
    d as f64 / (2.0 * (d as f64 - 1.0)) * unit_ball_volume(d)
}

/// Radius in dimension `d`:
/// `((log n + (dk − d + 1)/(d − 1) log log n + ξ) / (d/(2(d−1)) V_d(1) n))^(1/d)`.
pub fn general_d_radius(d: u32, n: f64, k: u32, xi: f64) -> Result<f64> {
    check_dimension(d)?;
    if !(n >= 3.0 && n.is_finite()) {
        return Err(domain(format!("n must be at least 3, got {n}")));
    }
    let df = d as f64;
    let num = n.ln() + (df * k as f64 - df + 1.0) / (df - 1.0) * n.ln().ln() + xi;
    if !(num > 0.0) {
        return Err(domain(format!("radius numerator {num} must be positive")));
    }
    Ok((num / (general_d_scale(d) * n)).powf(1.0 / df))
}

/// ξ in dimension `d` for location parameter `c`.
pub fn general_d_xi(area: f64, d: u32, k: u32, c: f64) -> Result<f64> {
    check_dimension(d)?;
    check_area(area)?;
    let df = d as f64;
    let q = (df - 1.0) / df;
    let log_mass = area.ln() + k as f64 * q.ln() + q * general_d_scale(d).ln()
        - unit_ball_volume(d - 1).ln()
        - ln_factorial(k);
    Ok((c + log_mass) / q)
}

/// Left side of the `d`-dimensional ξ equation; equals `e^{-c}` at the solution.
pub fn general_d_boundary_mass(area: f64, d: u32, k: u32, xi: f64) -> Result<f64> {
    check_dimension(d)?;
    let df = d as f64;
    let q = (df - 1.0) / df;
    Ok(area * q.powi(k as i32) * general_d_scale(d).powf(q)
        / ((q * xi).exp() * unit_ball_volume(d - 1) * ln_factorial(k).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn unit_ball_area() -> f64 {
        Region::UnitBall.boundary_area()
    }

    #[test]
    fn xi_for_unit_ball() {
        // A = (36π)^{1/3} makes ξ(k=0, c=0) = ln 6 exactly.
        let xi0 = xi_from_c(unit_ball_area(), 0, 0.0).unwrap();
        assert!((xi0 - 6f64.ln()).abs() < 1e-14);
        assert!((xi0 - 1.791759).abs() < 1e-6);
        let xi1 = xi_from_c(unit_ball_area(), 1, 0.0).unwrap();
        assert!((xi1 - (6f64.ln() + 1.5 * (2.0f64 / 3.0).ln())).abs() < 1e-14);
        assert!((xi1 - 1.183562).abs() < 1e-6);
    }

    #[test]
    fn c_from_xi_examples() {
        assert!(c_from_xi(unit_ball_area(), 0, 6f64.ln()).unwrap().abs() < 1e-14);
        // The rounded input ξ = 1.792044 sits 2.85e-4 above ln 6.
        assert!((c_from_xi(4.835976, 0, 1.792044).unwrap()).abs() < 2e-4);
        assert!((c_from_xi(1.0, 0, 0.0).unwrap() - PI.ln() / 3.0).abs() < 1e-15);
        assert!((PI.ln() / 3.0 - 0.381576).abs() < 1e-6);
        // c vanishes at ξ = 0 when ln A = ln(π)/3.
        let area = PI.cbrt();
        assert!(c_from_xi(area, 0, 0.0).unwrap().abs() < 1e-15);
        assert!(xi_from_c(0.0, 0, 0.0).is_err());
    }

    #[test]
    fn round_trip_and_residual() {
        for k in 0..=5 {
            for i in 0..=12 {
                let c = -3.0 + 0.5 * i as f64;
                for area in [0.5, 1.0, 4.835976, 6.0, 10.0] {
                    let xi = xi_from_c(area, k, c).unwrap();
                    assert!((c_from_xi(area, k, xi).unwrap() - c).abs() < 1e-12);
                    assert!(rel(boundary_mass(area, k, xi), (-c).exp()) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn radius_examples() {
        let r = critical_radius(1e6, 0, 1.792044).unwrap();
        assert!((r - 0.016047).abs() < 5e-7, "{r}");
        let r = critical_radius(1e6, 1, 1.183846).unwrap();
        assert!((r - 0.017316).abs() < 5e-7, "{r}");
        let n = std::f64::consts::E.powf(std::f64::consts::E).ceil();
        let xi = PI - radius_numerator(n, 0, 0.0).unwrap();
        let r = critical_radius(n, 0, xi).unwrap();
        assert!(rel(r.powi(3) * PI * n, PI) < 1e-12);
        assert!(critical_radius(1e6, 0, -20.0).is_err());
        assert!(critical_radius(2.0, 0, 0.0).is_err());
    }

    #[test]
    fn limit_probability_examples() {
        assert!((limit_probability(0.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert!((limit_probability(2.0) - 0.873423).abs() < 1e-6);
        assert_eq!(limit_probability(50.0), 1.0);
        assert_eq!(limit_probability(-50.0), 0.0);
        let mut prev = 0.0;
        for i in -40..=40 {
            let p = limit_probability(i as f64 * 0.25);
            assert!(p >= prev && (0.0..=1.0).contains(&p));
            prev = p;
        }
    }

    #[test]
    fn psi_examples() {
        let r: f64 = 0.05;
        let n = 1.0 / (4.0 / 3.0 * PI * r.powi(3));
        let p = psi(&Region::UnitBall, &Point3::ORIGIN, n, r, 0).unwrap();
        assert!(rel(p, (-1.0f64).exp()) < 1e-12);
        assert_eq!(psi(&Region::UnitBall, &Point3::ORIGIN, 0.0, r, 0).unwrap(), 1.0);
        let p = psi(&Region::UnitBall, &Point3::ORIGIN, 2.0 * n, r, 2).unwrap();
        assert!(rel(p, 2.0 * (-2.0f64).exp()) < 1e-12);
        assert!((2.0 * (-2.0f64).exp() - 0.270671).abs() < 1e-6);
    }

    #[test]
    fn psi_integral_rejects_cube() {
        assert!(matches!(
            psi_integral(&Region::UnitCube, 1e4, 0.05, 0),
            Err(Error::UnsupportedRegion(_))
        ));
    }

    #[test]
    fn psi_integral_interior_vanishes_when_balls_are_heavy() {
        // n (4/3)π r³ = 80: the interior contributes about n e^{-80}.
        let n = 1e5;
        let r = (80.0 / (n * 4.0 / 3.0 * PI)).cbrt();
        let big = crate::geometry::unit_ball_radius();
        let interior = quadrature::integrate(
            |s| n * poisson_pmf(n * ball_ball_intersection_volume(big, r, s).unwrap(), 0) * 4.0 * PI * s * s,
            0.0,
            big - r,
            &[],
            Tolerance::relative(1e-9),
        )
        .unwrap();
        assert!(interior.value < 1e-28);
        let total = psi_integral(&Region::UnitBall, n, r, 0).unwrap();
        assert!(total.value > 0.0 && total.value > 1e6 * interior.value);
    }

    #[test]
    fn boundary_layer_limits() {
        assert!((boundary_layer_limit(0, 0.0) - 0.682_784).abs() < 1e-6);
        assert!((boundary_layer_limit(0, 0.0) - PI.powf(-1.0 / 3.0)).abs() < 1e-15);
        assert!((boundary_layer_limit(1, 0.0) - 0.455_189).abs() < 1e-6);
        for k in 0..4 {
            let r = critical_radius(1e6, k, 0.0).unwrap();
            assert!(boundary_layer_integral(1e6, r, k).unwrap().value > 0.0);
        }
    }

    #[test]
    fn unit_ball_volumes() {
        assert!((unit_ball_volume(2) - PI).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-13);
        assert!((unit_ball_volume(4) - 4.934802).abs() < 1e-6);
    }

    #[test]
    fn general_d_reduces_to_three() {
        for i in 0..20 {
            let k = i % 4;
            let c = -1.0 + 0.2 * i as f64;
            let area = 0.5 + 0.45 * i as f64;
            let n = 10f64.powf(3.0 + 0.2 * i as f64);
            let xi3 = xi_from_c(area, k, c).unwrap();
            let xid = general_d_xi(area, 3, k, c).unwrap();
            assert!((xi3 - xid).abs() < 1e-12 * xi3.abs().max(1.0));
            let r3 = critical_radius(n, k, xi3).unwrap();
            let rd = general_d_radius(3, n, k, xi3).unwrap();
            assert!(rel(rd, r3) < 1e-12);
        }
    }

    #[test]
    fn general_d_residual() {
        for d in [4, 5, 7] {
            for k in 0..3 {
                let xi = general_d_xi(1.0, d, k, 0.0).unwrap();
                let mass = general_d_boundary_mass(1.0, d, k, xi).unwrap();
                assert!((mass - 1.0).abs() < 1e-12, "d={d} k={k} mass={mass}");
            }
        }
        assert!(general_d_radius(2, 1e4, 0, 0.0).is_err());
        assert!(general_d_radius(4, 1e4, 0, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn ln_factorial_matches_product() {
        let mut acc = 0.0f64;
        for k in 1..30u32 {
            acc += (k as f64).ln();
            assert!((ln_factorial(k) - acc).abs() < 1e-12 * acc.max(1.0));
        }
    }
}
