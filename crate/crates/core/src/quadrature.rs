//! Globally adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.
//!
//! Breakpoints split the range into initial panels so that kinks and
//! boundary layers known in advance are never straddled by a single rule.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stopping rule: converged when `error <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(centre);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(centre - x);
        let f2 = f(centre + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

const MAX_PANELS: usize = 20_000;

/// Integrates `f` over `[lo, hi]`, splitting first at every breakpoint that
/// falls strictly inside the interval.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<Quadrature> {
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(Error::Domain(format!(
            "quadrature interval [{lo}, {hi}] is not a finite ordered range"
        )));
    }
    if hi == lo {
        return Ok(Quadrature {
            value: 0.0,
            abs_error: 0.0,
            panels: 0,
            evaluations: 0,
        });
    }
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|b| b.is_finite() && *b > lo && *b < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(lo);
    edges.extend(cuts);
    edges.push(hi);
    for w in edges.windows(2) {
        let (value, error) = kronrod15(&f, w[0], w[1]);
        heap.push(Panel {
            lo: w[0],
            hi: w[1],
            value,
            error,
        });
    }
    let mut evaluations = 15 * heap.len();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut value: f64 = heap.iter().map(|p| p.value).sum();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    let mut steps = 0usize;

    loop {
        steps += 1;
        if steps.is_multiple_of(128) {
            // Resum to stop drift in the running totals.
            value = heap.iter().chain(&frozen).map(|p| p.value).sum();
            error = heap.iter().chain(&frozen).map(|p| p.error).sum();
        }
        if !(value.is_finite() && error.is_finite()) {
            return Err(Error::NonConvergence {
                estimate: value,
                achieved: error,
                requested: tol.target(0.0),
            });
        }
        let target = tol.target(value);
        let panels = heap.len() + frozen.len();
        if error <= target {
            let value = heap.iter().chain(&frozen).map(|p| p.value).sum();
            let abs_error = heap.iter().chain(&frozen).map(|p| p.error).sum();
            return Ok(Quadrature {
                value,
                abs_error,
                panels,
                evaluations,
            });
        }
        let fail = |value: f64, error: f64| Error::NonConvergence {
            estimate: value,
            achieved: error,
            requested: target,
        };
        if panels >= MAX_PANELS {
            return Err(fail(value, error));
        }
        let Some(worst) = heap.pop() else {
            return Err(fail(value, error));
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // Too narrow to split; its error stays in the total.
            frozen.push(worst);
            continue;
        }
        value -= worst.value;
        error -= worst.error;
        for (a, b) in [(worst.lo, mid), (mid, worst.hi)] {
            let (v, e) = kronrod15(&f, a, b);
            value += v;
            error += e;
            heap.push(Panel {
                lo: a,
                hi: b,
                value: v,
                error: e,
            });
        }
        evaluations += 30;
    }
}
