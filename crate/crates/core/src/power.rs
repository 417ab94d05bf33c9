//! Seeded Monte Carlo: power of the unimodality test and the limit-variance diagnostic.
//!
//! Replicate i of a run with seed s draws from `Stream::replicate(s, i)`.
//! Replicates run in parallel, and per-replicate outcomes are reduced either by
//! integer counts or in index order, so results are bit-identical for any
//! thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{decide, null_varsigma2, VarianceMode};
use crate::error::{check_range, Error, Result};
use crate::families::DistributionSpec;
use crate::moments::{delta_statistic_with, M2Divisor, MIN_TEST_SIZE};
use crate::rng::Stream;
use crate::scalar::compensated_sum;

pub const DEFAULT_REPS: usize = 10_000;
pub const MIN_REPS: usize = 100;
/// Two-sided 95% normal quantile used by [`wald_ci`].
pub const WALD_Z: f64 = 1.96;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerEstimate {
    pub spec: DistributionSpec,
    pub n: usize,
    pub reps: usize,
    pub level: f64,
    pub m2_divisor: M2Divisor,
    pub rejections: usize,
    /// Replicates with zero sample variance; counted as non-rejections.
    pub degenerate: usize,
    pub beta_hat: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub seed: u64,
}

/// `β̂ ∓ 1.96·√(β̂(1−β̂)/reps)`, clipped to [0, 1].
pub fn wald_ci(beta_hat: f64, reps: usize) -> (f64, f64) {
    let half = WALD_Z * (beta_hat * (1.0 - beta_hat) / reps as f64).sqrt();
    ((beta_hat - half).max(0.0), (beta_hat + half).min(1.0))
}

fn check_n(n: usize) -> Result<()> {
    if n < MIN_TEST_SIZE {
        return Err(Error::InsufficientSample {
            needed: MIN_TEST_SIZE,
            got: n,
        });
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Outcome {
    Reject,
    Accept,
    Degenerate,
}

/// Rejection rate of the null-BIU test over `reps` samples of size `n` from `spec`.
pub fn simulate_power(
    spec: &DistributionSpec,
    n: usize,
    reps: usize,
    level: f64,
    seed: u64,
) -> Result<PowerEstimate> {
    simulate_power_with(spec, n, reps, level, seed, M2Divisor::N)
}

/// [`simulate_power`] with a choice of divisor for m₂ inside `T_n`.
pub fn simulate_power_with(
    spec: &DistributionSpec,
    n: usize,
    reps: usize,
    level: f64,
    seed: u64,
    divisor: M2Divisor,
) -> Result<PowerEstimate> {
    check_n(n)?;
    check_range("reps", reps as f64, reps >= MIN_REPS, "reps >= 100")?;
    let varsigma = null_varsigma2::<f64>().sqrt();
    // validates the level once before fanning out
    decide(0.0, n, level, varsigma, VarianceMode::NullBiu)?;
    let sampler = spec.sampler()?;

    let (rejections, degenerate) = (0..reps as u64)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(n),
            |buf, i| {
                let mut stream = Stream::replicate(seed, i);
                sampler.fill(&mut stream, n, buf);
                match delta_statistic_with(buf, divisor) {
                    Ok(t) => {
                        let res = decide(t, n, level, varsigma, VarianceMode::NullBiu)
                            .expect("level validated above");
                        if res.reject {
                            Outcome::Reject
                        } else {
                            Outcome::Accept
                        }
                    }
                    Err(_) => Outcome::Degenerate,
                }
            },
        )
        .map(|o| match o {
            Outcome::Reject => (1usize, 0usize),
            Outcome::Accept => (0, 0),
            Outcome::Degenerate => (0, 1),
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let beta_hat = rejections as f64 / reps as f64;
    let (ci_lower, ci_upper) = wald_ci(beta_hat, reps);
    Ok(PowerEstimate {
        spec: *spec,
        n,
        reps,
        level,
        m2_divisor: divisor,
        rejections,
        degenerate,
        beta_hat,
        ci_lower,
        ci_upper,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CltDiagnostic {
    pub spec: DistributionSpec,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    /// Exact Δ of the law.
    pub delta: f64,
    /// Empirical variance of `√n (T_n − Δ)` across replicates.
    pub empirical_var: f64,
    /// Closed-form limit variance ς².
    pub target_var: f64,
    pub degenerate: usize,
}

impl CltDiagnostic {
    pub fn relative_error(&self) -> f64 {
        (self.empirical_var - self.target_var).abs() / self.target_var
    }
}

/// Empirical variance of `√n (T_n − Δ)` next to the limit variance ς².
pub fn clt_diagnostic(spec: &DistributionSpec, n: usize, reps: usize, seed: u64) -> Result<CltDiagnostic> {
    check_n(n)?;
    check_range("reps", reps as f64, reps >= 2, "reps >= 2")?;
    let delta = spec.delta()?;
    let target_var = spec.varsigma2()?;
    let sampler = spec.sampler()?;
    let root_n = (n as f64).sqrt();

    let values: Vec<Option<f64>> = (0..reps as u64)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(n),
            |buf, i| {
                let mut stream = Stream::replicate(seed, i);
                sampler.fill(&mut stream, n, buf);
                delta_statistic_with(buf, M2Divisor::N)
                    .ok()
                    .map(|t| root_n * (t - delta))
            },
        )
        .collect();
    let kept: Vec<f64> = values.iter().flatten().copied().collect();
    let degenerate = reps - kept.len();
    if kept.len() < 2 {
        return Err(Error::DegenerateSample);
    }
    let m = kept.len() as f64;
    let mean = compensated_sum(kept.iter().copied()) / m;
    let ss = compensated_sum(kept.iter().map(|&v| (v - mean) * (v - mean)));
    Ok(CltDiagnostic {
        spec: *spec,
        n,
        reps,
        seed,
        delta,
        empirical_var: ss / (m - 1.0),
        target_var,
        degenerate,
    })
}
