//! Monte-Carlo experiments for the limit laws: empirical CDFs of the two
//! critical radii against `exp(−e^{−c})`, the rate at which they coincide,
//! and the count of degree-`k` vertices at `r_n`.
//!
//! Trials run in parallel but are collected in trial order, so a report is a
//! deterministic function of its configuration.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{limit_probability, poisson_pmf, AsymptoticParams};
use crate::critical::{critical_radii, RadiusResult};
use crate::error::{Error, Result};
use crate::geometry::Region;
use crate::rgg::{build_graph, nearest_distances};
use crate::sampling::{sample, SampleMode, SampleSpec};

/// Two-sided 95% normal quantile used for Wilson intervals.
pub const WILSON_Z: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointProcess {
    /// Exactly `n` uniform points per trial.
    Uniform,
    /// `Poisson(n)` uniform points per trial.
    Poisson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub region: Region,
    pub n: usize,
    /// Order in the limit law; the radii examined are for `k + 1`.
    pub k: u32,
    pub process: PointProcess,
    pub trials: usize,
    pub c_grid: Vec<f64>,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        self.region.validate()?;
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.n < 3 {
            return bad(format!("n must be at least 3, got {}", self.n));
        }
        if self.order() >= self.n {
            return bad(format!("k + 1 = {} must be below n = {}", self.order(), self.n));
        }
        if self.c_grid.is_empty() {
            return bad("c_grid must not be empty".into());
        }
        if self.c_grid.iter().any(|c| !c.is_finite()) {
            return bad("c_grid values must be finite".into());
        }
        if self.c_grid.windows(2).any(|w| w[1] < w[0]) {
            return bad("c_grid must be sorted ascending".into());
        }
        for &c in &self.c_grid {
            self.params(c)?.radius()?;
        }
        Ok(())
    }

    /// Order of the minimum degree / connectivity examined, `k + 1`.
    pub fn order(&self) -> usize {
        self.k as usize + 1
    }

    pub fn params(&self, c: f64) -> Result<AsymptoticParams> {
        AsymptoticParams::for_region(&self.region, self.n as f64, self.k, c)
    }

    pub fn sample_spec(&self, trial: u64) -> SampleSpec {
        let mode = match self.process {
            PointProcess::Uniform => SampleMode::Uniform { n: self.n },
            PointProcess::Poisson => SampleMode::Poisson {
                intensity: self.n as f64,
            },
        };
        SampleSpec {
            region: self.region,
            mode,
            seed: self.seed,
            trial_index: trial,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub n_points: usize,
    pub rho_delta: f64,
    pub rho_kappa: f64,
    pub mst_longest_edge: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Wilson score interval for `successes` out of `trials`, clamped to [0, 1].
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> Interval {
    if trials == 0 {
        return Interval { lo: 0.0, hi: 1.0 };
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Interval {
        lo: (centre - half).clamp(0.0, 1.0),
        hi: (centre + half).clamp(0.0, 1.0),
    }
}

/// One row of the empirical CDF table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfRow {
    pub c: f64,
    pub xi: f64,
    pub r_n: f64,
    pub theoretical: f64,
    pub empirical_delta: f64,
    pub empirical_kappa: f64,
    pub wilson_delta: Interval,
    pub wilson_kappa: Interval,
}

/// Sample moments of the number of degree-`k` vertices at `r_n(c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeCountStats {
    pub c: f64,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    /// Limiting mean `e^{−c}`.
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rows: Vec<CdfRow>,
    pub sup_deviation_delta: f64,
    pub sup_deviation_kappa: f64,
    /// Sup-norm distance between the two empirical CDFs.
    pub sup_gap_delta_kappa: f64,
    pub equality_rate: f64,
    pub degree_counts: Vec<DegreeCountStats>,
    pub trials: Vec<TrialRecord>,
    /// Wall-clock seconds; kept out of the JSON so reports stay reproducible.
    #[serde(skip)]
    pub elapsed_seconds: f64,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serialisable") + "\n"
    }

    pub fn trials_csv(&self) -> String {
        let mut out = String::from("trial,n_points,rho_delta,rho_kappa,mst_longest_edge\n");
        for t in &self.trials {
            let mst = t.mst_longest_edge.map(|m| m.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                t.trial, t.n_points, t.rho_delta, t.rho_kappa, mst
            );
        }
        out
    }

    /// Plot-ready CDF table; the Wilson columns bound the minimum-degree CDF.
    pub fn cdf_csv(&self) -> String {
        let mut out = String::from("c,r_n,empirical_delta,empirical_kappa,theoretical,wilson_lo,wilson_hi\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.c,
                r.r_n,
                r.empirical_delta,
                r.empirical_kappa,
                r.theoretical,
                r.wilson_delta.lo,
                r.wilson_delta.hi
            );
        }
        out
    }

    /// Human-readable summary of the deviations.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let cfg = &self.config;
        let _ = writeln!(
            out,
            "region={} n={} k={} process={:?} trials={} seed={}",
            cfg.region.name(),
            cfg.n,
            cfg.k,
            cfg.process,
            cfg.trials,
            cfg.seed
        );
        let _ = writeln!(
            out,
            "{:>8} {:>12} {:>10} {:>10} {:>10}",
            "c", "r_n", "P(delta)", "P(kappa)", "limit"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>8.3} {:>12.6e} {:>10.4} {:>10.4} {:>10.4}",
                r.c, r.r_n, r.empirical_delta, r.empirical_kappa, r.theoretical
            );
        }
        let _ = writeln!(
            out,
            "sup deviation: delta {:.4}, kappa {:.4}; delta/kappa gap {:.4}; equality rate {:.4}",
            self.sup_deviation_delta, self.sup_deviation_kappa, self.sup_gap_delta_kappa, self.equality_rate
        );
        out
    }
}

struct TrialOutcome {
    record: TrialRecord,
    degree_counts: Vec<usize>,
}

fn run_trial(config: &ExperimentConfig, trial: u64, radii: &[f64]) -> Result<TrialOutcome> {
    let set = sample(&config.sample_spec(trial))?;
    let order = config.order();
    if set.len() <= order {
        return Err(Error::InvalidConfig(format!(
            "trial {trial} drew {} points, too few for order {order}",
            set.len()
        )));
    }
    let RadiusResult {
        rho_delta,
        rho_kappa,
        mst_longest_edge,
        ..
    } = critical_radii(&set.points, order)?;

    // Degree of i at radius r is exactly k iff d_k(i) <= r < d_{k+1}(i).
    let k = config.k as usize;
    let near = nearest_distances(&set.points, order)?;
    let degree_counts = radii
        .iter()
        .map(|&r| {
            near.iter()
                .filter(|d| (k == 0 || d[k - 1] <= r) && d[k] > r)
                .count()
        })
        .collect();
    Ok(TrialOutcome {
        record: TrialRecord {
            trial,
            n_points: set.len(),
            rho_delta,
            rho_kappa,
            mst_longest_edge,
        },
        degree_counts,
    })
}

fn run_trials(config: &ExperimentConfig, radii: &[f64]) -> Result<Vec<TrialOutcome>> {
    (0..config.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(config, t, radii))
        .collect()
}

fn mean_variance(xs: impl ExactSizeIterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let variance = if n > 1.0 {
        xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, variance)
}

/// Runs every trial once and evaluates all thresholds of `c_grid` on the
/// same sampled point sets.
pub fn run_cdf_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let started = Instant::now();
    let params: Vec<AsymptoticParams> = config
        .c_grid
        .iter()
        .map(|&c| config.params(c))
        .collect::<Result<_>>()?;
    let radii: Vec<f64> = params.iter().map(|p| p.radius()).collect::<Result<_>>()?;
    let outcomes = run_trials(config, &radii)?;
    let trials = outcomes.len();

    let mut rows = Vec::with_capacity(radii.len());
    let mut degree_counts = Vec::with_capacity(radii.len());
    for (ci, (p, &r_n)) in params.iter().zip(&radii).enumerate() {
        let hits_delta = outcomes.iter().filter(|o| o.record.rho_delta <= r_n).count();
        let hits_kappa = outcomes.iter().filter(|o| o.record.rho_kappa <= r_n).count();
        rows.push(CdfRow {
            c: p.c,
            xi: p.xi,
            r_n,
            theoretical: limit_probability(p.c),
            empirical_delta: hits_delta as f64 / trials as f64,
            empirical_kappa: hits_kappa as f64 / trials as f64,
            wilson_delta: wilson_interval(hits_delta, trials, WILSON_Z),
            wilson_kappa: wilson_interval(hits_kappa, trials, WILSON_Z),
        });
        let (mean, variance) = mean_variance(outcomes.iter().map(|o| o.degree_counts[ci] as f64));
        degree_counts.push(DegreeCountStats {
            c: p.c,
            mean,
            variance,
            std_error: (variance / trials as f64).sqrt(),
            expected: (-p.c).exp(),
        });
    }
    let sup = |f: &dyn Fn(&CdfRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let sup_deviation_delta = sup(&|r| (r.empirical_delta - r.theoretical).abs());
    let sup_deviation_kappa = sup(&|r| (r.empirical_kappa - r.theoretical).abs());
    let sup_gap_delta_kappa = sup(&|r| (r.empirical_delta - r.empirical_kappa).abs());
    let equal = outcomes
        .iter()
        .filter(|o| o.record.rho_delta == o.record.rho_kappa)
        .count();

    Ok(ExperimentReport {
        config: config.clone(),
        rows,
        sup_deviation_delta,
        sup_deviation_kappa,
        sup_gap_delta_kappa,
        equality_rate: equal as f64 / trials as f64,
        degree_counts,
        trials: outcomes.into_iter().map(|o| o.record).collect(),
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Fraction of trials in which the minimum-degree and connectivity radii of
/// order `k + 1` coincide exactly.
pub fn run_equality_experiment(config: &ExperimentConfig) -> Result<f64> {
    config.validate()?;
    let order = config.order();
    let equal: Vec<bool> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let set = sample(&config.sample_spec(t))?;
            let r = critical_radii(&set.points, order)?;
            Ok(r.rho_delta == r.rho_kappa)
        })
        .collect::<Result<_>>()?;
    Ok(equal.iter().filter(|&&e| e).count() as f64 / equal.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmfRow {
    pub count: usize,
    pub empirical: f64,
    pub poisson: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeCountSummary {
    pub c: f64,
    pub r_n: f64,
    pub k: u32,
    pub trials: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    /// Limiting mean `e^{−c}` of the count.
    pub expected: f64,
    pub pmf: Vec<PmfRow>,
}

impl DegreeCountSummary {
    /// `(mean − e^{−c}) / standard error`; infinite when the sample has no spread.
    pub fn z_score(&self) -> f64 {
        let gap = self.mean - self.expected;
        if self.std_error > 0.0 {
            gap / self.std_error
        } else if gap == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(gap)
        }
    }
}

/// Counts vertices of degree exactly `k` in the graph at `r_n(c)` and compares
/// the count distribution with `Poisson(e^{−c})`.
pub fn run_degree_count_experiment(config: &ExperimentConfig, c: f64) -> Result<DegreeCountSummary> {
    config.validate()?;
    let r_n = config.params(c)?.radius()?;
    let k = config.k as usize;
    let counts: Vec<usize> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let set = sample(&config.sample_spec(t))?;
            if set.is_empty() {
                return Ok(0);
            }
            let g = build_graph(&set.points, r_n)?;
            Ok((0..g.len()).filter(|&v| g.degree(v) == k).count())
        })
        .collect::<Result<_>>()?;
    let trials = counts.len();
    let (mean, variance) = mean_variance(counts.iter().map(|&x| x as f64));
    let expected = (-c).exp();
    let top = counts.iter().copied().max().unwrap_or(0);
    let pmf = (0..=top)
        .map(|count| PmfRow {
            count,
            empirical: counts.iter().filter(|&&x| x == count).count() as f64 / trials as f64,
            poisson: poisson_pmf(expected, count as u32),
        })
        .collect();
    Ok(DegreeCountSummary {
        c,
        r_n,
        k: config.k,
        trials,
        mean,
        variance,
        std_error: (variance / trials as f64).sqrt(),
        expected,
        pmf,
    })
}
