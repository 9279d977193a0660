use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chain::{run_chain, ChainConfig, Target};
use super::events::{Event, EventFamily};
use crate::ensembles::{moment_vector, sample_alpha_gaf, split_disk};
use crate::error::{Error, Result};
use crate::rigidity::{event_check, EventParams};
use crate::rng::substream;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GibbsConfig {
    pub alpha: f64,
    pub n: usize,
    pub r0: f64,
    pub m: usize,
    pub params: EventParams,
    pub trials: usize,
    pub seed: u64,
    /// Kernel chain length per passing sample, after burn-in.
    pub kernel_steps: usize,
    pub kernel_burn_in: usize,
    pub kernel_thin: usize,
    pub step_size: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub event_id: usize,
    pub empirical: f64,
    pub kernel: f64,
    pub ratio: f64,
    /// Standard errors of `empirical` and `kernel`.
    pub stderr_each: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GibbsReport {
    pub trials: usize,
    pub passing: usize,
    pub wrong_count: usize,
    pub failed_checks: usize,
    pub rows: Vec<RatioRow>,
    /// `max_t ratio / min_t ratio`; `+∞` if some ratio is zero.
    pub spread: f64,
}

enum Outcome {
    WrongCount,
    Failed,
    Passed { empirical: Vec<bool>, kernel: Vec<f64> },
}

fn run_trial(cfg: &GibbsConfig, family: &EventFamily, t: usize) -> Result<Outcome> {
    let sample = sample_alpha_gaf(cfg.n, cfg.alpha, substream(&[cfg.seed, t as u64]))?;
    let split = match split_disk(&sample, cfg.r0) {
        Ok(s) => s,
        Err(Error::BoundaryPoint { .. }) => return Ok(Outcome::Failed),
        Err(e) => return Err(e),
    };
    if split.m() != cfg.m {
        return Ok(Outcome::WrongCount);
    }
    if !event_check(&split, &cfg.params, cfg.alpha)?.all() {
        return Ok(Outcome::Failed);
    }
    let mut family = family.clone();
    let empirical = family.indicators(&split.inside).to_vec();
    let s = moment_vector(&split, cfg.alpha).s;
    let chain = ChainConfig {
        m: cfg.m,
        alpha: cfg.alpha,
        r0: cfg.r0,
        target: Target::VandermondeSq,
        steps: cfg.kernel_steps,
        burn_in: cfg.kernel_burn_in,
        step_size: cfg.step_size,
        thin: cfg.kernel_thin,
        seed: substream(&[cfg.seed, t as u64, 1]),
        audit: false,
    };
    let mut hits = vec![0usize; family.len()];
    let mut kept = 0usize;
    run_chain(&split.outside, &s, Some(&split.inside), &chain, |z| {
        kept += 1;
        for (h, &b) in hits.iter_mut().zip(family.indicators(z)) {
            *h += b as usize;
        }
    })?;
    let kernel = hits.iter().map(|&h| h as f64 / kept as f64).collect();
    Ok(Outcome::Passed { empirical, kernel })
}

/// Compares the conditional frequencies of `events` among good-event samples
/// with the masses of the same events under the |V|² kernel on Σ_{m,s}.
///
/// Trial `t` depends only on `(seed, t)`, so a run with more trials extends a
/// shorter one.
pub fn gibbs_ratio_experiment(cfg: &GibbsConfig, events: &[Event]) -> Result<GibbsReport> {
    if cfg.m == 0 || cfg.trials == 0 {
        return Err(Error::invalid("need m ≥ 1 and at least one trial"));
    }
    cfg.params.validate()?;
    let family = EventFamily::new(events.to_vec())?;
    let outcomes: Vec<Outcome> =
        (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, &family, t)).collect::<Result<_>>()?;

    let mut wrong_count = 0;
    let mut failed_checks = 0;
    let mut emp: Vec<Vec<bool>> = Vec::new();
    let mut ker: Vec<Vec<f64>> = Vec::new();
    for o in outcomes {
        match o {
            Outcome::WrongCount => wrong_count += 1,
            Outcome::Failed => failed_checks += 1,
            Outcome::Passed { empirical, kernel } => {
                emp.push(empirical);
                ker.push(kernel);
            }
        }
    }
    let passing = emp.len();
    if passing == 0 {
        return Err(Error::InsufficientEvents { total: cfg.trials });
    }
    let np = passing as f64;
    let rows: Vec<RatioRow> = (0..events.len())
        .map(|e| {
            let p = emp.iter().filter(|v| v[e]).count() as f64 / np;
            let k = ker.iter().map(|v| v[e]).sum::<f64>() / np;
            let kvar = if passing > 1 {
                ker.iter().map(|v| (v[e] - k).powi(2)).sum::<f64>() / (np - 1.0)
            } else {
                0.0
            };
            RatioRow {
                event_id: e,
                empirical: p,
                kernel: k,
                ratio: p / k,
                stderr_each: [(p * (1.0 - p) / np).sqrt(), (kvar / np).sqrt()],
            }
        })
        .collect();
    let max = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    Ok(GibbsReport { trials: cfg.trials, passing, wrong_count, failed_checks, rows, spread: max / min })
}
