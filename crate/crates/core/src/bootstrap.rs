//! Parametric bootstrap for the goodness-of-fit statistics.

use crate::dpareto::{mle, DParetoParams, FrequencyTable, ShapeFit};
use crate::error::{Error, Result};
use crate::rng::stream;
use crate::stats::{evaluate, StatValue, StatisticId};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Missing fields in serialised form take their defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub alpha: f64,
    pub master_seed: u64,
    pub workers: usize,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            replicates: 500,
            alpha: 0.05,
            master_seed: 0,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config(
                "bootstrap needs at least one replicate".into(),
            ));
        }
        check_alpha(self.alpha)?;
        if self.workers == 0 {
            return Err(Error::Config("worker count must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Reject,
    Retain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub statistic: StatValue,
    pub fit: ShapeFit,
    pub critical_value: f64,
    pub p_value: f64,
    pub replicates: usize,
    pub degenerate_replicate_count: usize,
    pub alpha: f64,
    pub decision: Decision,
}

/// The bootstrap critical value: the `b(1−α)`-th order statistic when
/// `b(1−α)` is an integer, the `(⌊b(1−α)⌋+1)`-th otherwise.
pub fn critical_value(replicate_stats: &[f64], alpha: f64) -> Result<f64> {
    if replicate_stats.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_alpha(alpha)?;
    let mut sorted = replicate_stats.to_vec();
    sorted.sort_by(f64::total_cmp);
    let b = sorted.len();
    Ok(sorted[order_index(b, alpha) - 1])
}

/// One-based rank used by [`critical_value`].
fn order_index(b: usize, alpha: f64) -> usize {
    let q = b as f64 * (1.0 - alpha);
    let r = q.round();
    let rank = if (q - r).abs() <= 1e-9 * q.max(1.0) {
        r as usize
    } else {
        q.floor() as usize + 1
    };
    rank.clamp(1, b)
}

/// `#{K* ≥ K_obs} / b`.
pub fn p_value(replicate_stats: &[f64], observed: f64) -> f64 {
    let hits = replicate_stats.iter().filter(|&&k| k >= observed).count();
    hits as f64 / replicate_stats.len() as f64
}

/// Fits `ν̂`, evaluates `id` and calibrates it by `cfg.replicates` parametric
/// bootstrap samples drawn from `DPareto(ν̂)`.
pub fn bootstrap_test(
    data: &FrequencyTable,
    id: StatisticId,
    cfg: &BootstrapConfig,
) -> Result<GofReport> {
    let mut reports = bootstrap_tests(data, &[id], cfg)?;
    Ok(reports.pop().expect("one report per statistic"))
}

/// As [`bootstrap_test`] for several statistics sharing the same bootstrap
/// samples.
pub fn bootstrap_tests(
    data: &FrequencyTable,
    ids: &[StatisticId],
    cfg: &BootstrapConfig,
) -> Result<Vec<GofReport>> {
    cfg.validate()?;
    let pool = cfg.pool()?;
    pool.install(|| {
        run(
            data,
            ids,
            cfg.replicates,
            cfg.alpha,
            cfg.master_seed,
            &[],
            true,
        )
    })
}

/// The engine. Replicate `i` draws from `stream(seed, path ++ [i])`.
pub(crate) fn run(
    data: &FrequencyTable,
    ids: &[StatisticId],
    replicates: usize,
    alpha: f64,
    seed: u64,
    path: &[u64],
    parallel: bool,
) -> Result<Vec<GofReport>> {
    for id in ids {
        id.validate()?;
    }
    let fit = mle(data)?;
    let observed = ids
        .iter()
        .map(|&id| evaluate(id, data, fit.nu_hat))
        .collect::<Result<Vec<_>>>()?;
    let params = DParetoParams::new(fit.nu_hat)?;
    let n = data.total() as usize;

    let replicate = |i: usize| -> Result<(bool, Vec<f64>)> {
        let mut key = path.to_vec();
        key.push(i as u64);
        let star = params.sample(n, &mut stream(seed, &key)).compress();
        let wrap = |e: Error| Error::Replicate {
            index: i,
            source: Box::new(e),
        };
        let refit = mle(&star).map_err(wrap)?;
        let values = ids
            .iter()
            .map(|&id| {
                evaluate(id, &star, refit.nu_hat)
                    .map(|v| v.value)
                    .map_err(wrap)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((refit.degenerate, values))
    };
    let results: Vec<(bool, Vec<f64>)> = if parallel {
        (0..replicates)
            .into_par_iter()
            .map(replicate)
            .collect::<Result<_>>()?
    } else {
        (0..replicates).map(replicate).collect::<Result<_>>()?
    };

    let degenerate = results.iter().filter(|r| r.0).count();
    observed
        .into_iter()
        .enumerate()
        .map(|(j, statistic)| {
            let column: Vec<f64> = results.iter().map(|r| r.1[j]).collect();
            let critical = critical_value(&column, alpha)?;
            Ok(GofReport {
                statistic,
                fit,
                critical_value: critical,
                p_value: p_value(&column, statistic.value),
                replicates,
                degenerate_replicate_count: degenerate,
                alpha,
                decision: if statistic.value > critical {
                    Decision::Reject
                } else {
                    Decision::Retain
                },
            })
        })
        .collect()
}
