//! Shared fixtures for the criterion benchmarks.

use critrad::sampling::{sample, SampleMode, SampleSpec};
use critrad::{Point3, Region};

/// `n` uniform points in the unit-volume ball, fixed by `seed`.
pub fn ball_points(n: usize, seed: u64) -> Vec<Point3> {
    let spec = SampleSpec {
        region: Region::UnitBall,
        mode: SampleMode::Uniform { n },
        seed,
        trial_index: 0,
    };
    sample(&spec).expect("valid fixture spec").points
}
