//! Critical transmission radii of random geometric graphs in three
//! dimensions.
//!
//! The crate evaluates the closed-form radius
//! `r_n = ((log n + (3k/2 − 1) log log n + ξ) / (π n))^(1/3)`, under which the
//! probability that the minimum degree (or vertex connectivity) of the graph
//! on `n` uniform points is at least `k + 1` tends to `exp(−e^{−c})`, and
//! provides the exact geometry, quadrature and Monte-Carlo machinery needed to
//! check that law numerically.
//!
//! Layers, bottom up:
//! - [`geometry`]: regions and ball/region intersection volumes
//! - [`quadrature`]: adaptive Gauss–Kronrod integration
//! - [`sampling`]: seeded uniform and Poisson point processes
//! - [`rgg`]: grid-backed geometric graphs and nearest-neighbour distances
//! - [`critical`]: minimum-degree and connectivity radii, MST longest edge
//! - [`asymptotics`]: the radius formula, ξ ↔ c and the limiting integrals
//! - [`harness`]: Monte-Carlo experiments and reports

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod critical;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod quadrature;
pub mod rgg;
pub mod sampling;
pub mod selftest;

pub use critical::RadiusResult;
pub use error::{Error, Result};
pub use geometry::{Point3, Region};
pub use harness::{ExperimentConfig, ExperimentReport, PointProcess};
pub use rgg::GeometricGraph;
pub use sampling::{PointSet, SampleMode, SampleSpec};
