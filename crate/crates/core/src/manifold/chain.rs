use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::completion::{complete_configuration, random_on_manifold, Completion};
use crate::conditional::{gaf_cond_logdensity, OutsideCache};
use crate::ensembles::InsideOutsideSplit;
use crate::error::{Error, Result};
use crate::numerics::log_vandermonde;
use crate::rng::{complex_gaussian, stream, substream};

const TAG_CHAIN: u64 = 11;
const INIT_ATTEMPTS: usize = 100_000;
const ADAPT_WINDOW: usize = 50;
const ACCEPT_LOW: f64 = 0.25;
const ACCEPT_HIGH: f64 = 0.40;

/// Unnormalized density of the chain with respect to Lebesgue measure on the
/// free coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    VandermondeSq,
    ExactConditional,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub m: usize,
    pub alpha: f64,
    pub r0: f64,
    pub target: Target,
    /// Steps after burn-in.
    pub steps: usize,
    pub burn_in: usize,
    pub step_size: f64,
    pub thin: usize,
    pub seed: u64,
    /// Compare every accepted log-ratio with the directly evaluated density.
    #[serde(default)]
    pub audit: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChainStats {
    pub proposals: usize,
    pub accepted: usize,
    pub outside_disk: usize,
    pub completion_rejects: usize,
    pub step_size: f64,
    /// Largest |cached log-ratio − direct log-density difference| over accepted steps.
    pub audit_gap: Option<f64>,
    pub audited: usize,
}

impl ChainStats {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainOutput {
    pub samples: Vec<Vec<Complex64>>,
    pub stats: ChainStats,
}

struct Evaluator {
    target: Target,
    cache: Option<OutsideCache>,
    split: Option<InsideOutsideSplit>,
    alpha: f64,
    
}

impl Evaluator {
    fn log_target(&self, zeta: &[Complex64]) -> f64 {
        match self.target {
            Target::VandermondeSq => 2.0 * log_vandermonde(zeta).ln(),
            Target::ExactConditional => self.cache.as_ref().unwrap().partial_logdensity(zeta),
        }
    }

    fn direct(&self, zeta: &[Complex64]) -> f64 {
        gaf_cond_logdensity(&self.split.as_ref().unwrap().with_inside(zeta.to_vec()), self.alpha)
    }
}

/// Runs a Metropolis chain on Σ_{m,s} ∩ D^m and hands every kept state to `visit`.
/// The first `m − k` coordinates are moved; the last `k` are completed.
pub fn run_chain<F: FnMut(&[Complex64])>(
    omega: &[Complex64],
    s: &[Complex64],
    init: Option<&[Complex64]>,
    cfg: &ChainConfig,
    mut visit: F,
) -> Result<ChainStats> {
    let m = cfg.m;
    let k = s.len();
    if m <= k {
        return Err(Error::invalid(format!("need m > k, got m = {m}, k = {k}")));
    }
    if cfg.steps == 0 || cfg.thin == 0 {
        return Err(Error::invalid("steps and thin must be positive"));
    }
    if !(cfg.step_size >= 0.0) || !(cfg.r0 > 0.0) {
        return Err(Error::invalid("step size must be non-negative and r0 positive"));
    }
    let mut rng = stream(cfg.seed, substream(&[TAG_CHAIN]));
    let mut state: Vec<Complex64> = match init {
        Some(z) => {
            if z.len() != m || z.iter().any(|w| !(w.norm() < cfg.r0)) {
                return Err(Error::invalid("initial configuration must have m points inside the disk"));
            }
            let mut z = z.to_vec();
            z.shuffle(&mut rng);
            z
        }
        None => random_on_manifold(&mut rng, m, s, cfg.r0, INIT_ATTEMPTS)?,
    };
    let eval = Evaluator {
        target: cfg.target,
        cache: (cfg.target == Target::ExactConditional).then(|| OutsideCache::new(omega, m, cfg.alpha)),
        split: (cfg.audit && cfg.target == Target::ExactConditional).then(|| InsideOutsideSplit {
            inside: state.clone(),
            outside: omega.to_vec(),
            r0: cfg.r0,
            theta_gap: omega.iter().map(|w| w.norm() - cfg.r0).fold(f64::INFINITY, f64::min),
        }),
        alpha: cfg.alpha,
    };
    let mut current = eval.log_target(&state);
    let mut direct_current = eval.split.as_ref().map(|_| eval.direct(&state));
    let free = m - k;
    let mut stats = ChainStats { step_size: cfg.step_size, ..Default::default() };
    let mut window = (0usize, 0usize);
    let mut proposal = state.clone();

    for step in 0..cfg.burn_in + cfg.steps {
        let burning = step < cfg.burn_in;
        let i = rng.gen_range(0..free);
        let dz = complex_gaussian(&mut rng) * stats.step_size;
        let u: f64 = rng.gen();
        proposal.copy_from_slice(&state);
        proposal[i] += dz;
        let mut accepted = false;
        let valid = if !(proposal[i].norm() < cfg.r0) {
            stats.outside_disk += 1;
            false
        } else if k == 0 {
            true
        } else {
            match complete_configuration(&proposal[..free], s, cfg.r0) {
                Ok(Completion::Accepted(c)) => {
                    proposal[free..].copy_from_slice(&c);
                    true
                }
                Ok(Completion::OutsideDisk) => {
                    stats.outside_disk += 1;
                    false
                }
                Ok(Completion::Inaccurate(_)) | Err(_) => {
                    stats.completion_rejects += 1;
                    false
                }
            }
        };
        if valid {
            let next = eval.log_target(&proposal);
            let log_ratio = next - current;
            if u.ln() < log_ratio {
                accepted = true;
                if let Some(dc) = direct_current {
                    let dn = eval.direct(&proposal);
                    let gap = (log_ratio - (dn - dc)).abs();
                    stats.audit_gap = Some(stats.audit_gap.map_or(gap, |g: f64| g.max(gap)));
                    stats.audited += 1;
                    direct_current = Some(dn);
                }
                std::mem::swap(&mut state, &mut proposal);
                current = next;
            }
        }
        if burning {
            window.0 += 1;
            window.1 += accepted as usize;
            if window.0 == ADAPT_WINDOW {
                let rate = window.1 as f64 / ADAPT_WINDOW as f64;
                if rate < ACCEPT_LOW {
                    stats.step_size *= 0.8;
                } else if rate > ACCEPT_HIGH {
                    stats.step_size = (stats.step_size * 1.25).min(2.0 * cfg.r0);
                }
                window = (0, 0);
            }
        } else {
            stats.proposals += 1;
            stats.accepted += accepted as usize;
            if (step - cfg.burn_in) % cfg.thin == 0 {
                visit(&state);
            }
        }
    }
    Ok(stats)
}

/// Collects the kept states of [`run_chain`].
pub fn mcmc_on_manifold(
    omega: &[Complex64],
    s: &[Complex64],
    init: Option<&[Complex64]>,
    cfg: &ChainConfig,
) -> Result<ChainOutput> {
    let mut samples = Vec::with_capacity(cfg.steps / cfg.thin.max(1) + 1);
    let stats = run_chain(omega, s, init, cfg, |z| samples.push(z.to_vec()))?;
    Ok(ChainOutput { samples, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::power_sums;
    use crate::rng::uniform_in_disk;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg(target: Target) -> ChainConfig {
        ChainConfig {
            m: 3,
            alpha: 1.0,
            r0: 1.0,
            target,
            steps: 2000,
            burn_in: 500,
            step_size: 0.2,
            thin: 1,
            seed: 9,
            audit: false,
        }
    }

    fn outside(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = stream(seed, 0);
        (0..n)
            .map(|_| {
                let z = uniform_in_disk(&mut rng, 1.0);
                z * (1.3 / z.norm().max(0.1))
            })
            .collect()
    }

    #[test]
    fn zero_step_is_constant() {
        let init = [c(0.1, 0.2), c(-0.3, 0.1), c(0.2, -0.4)];
        let s = power_sums(&init, 1);
        let mut cf = cfg(Target::VandermondeSq);
        cf.step_size = 0.0;
        let out = mcmc_on_manifold(&[], &s, Some(&init), &cf).unwrap();
        let first = &out.samples[0];
        assert!(out.samples.iter().all(|z| z == first));
        let p = power_sums(first, 1);
        assert!((p[0] - s[0]).norm() < 1e-12);
    }

    #[test]
    fn samples_stay_on_manifold() {
        let init = [c(0.1, 0.2), c(-0.3, 0.1), c(0.2, -0.4), c(0.0, 0.5)];
        let s = power_sums(&init, 2);
        let mut cf = cfg(Target::ExactConditional);
        cf.m = 4;
        let om = outside(12, 1);
        let out = mcmc_on_manifold(&om, &s, Some(&init), &cf).unwrap();
        assert!(out.stats.accepted > 0);
        for z in &out.samples {
            assert!(z.iter().all(|w| w.norm() < 1.0));
            let p = power_sums(z, 2);
            assert!((p[0] - s[0]).norm() < 1e-9 && (p[1] - s[1]).norm() < 1e-9);
        }
    }

    #[test]
    fn audit_gap_is_tiny() {
        let om = outside(20, 2);
        let init = [c(0.1, 0.2), c(-0.3, 0.1), c(0.2, -0.4)];
        let s = power_sums(&init, 1);
        let mut cf = cfg(Target::ExactConditional);
        cf.audit = true;
        let out = mcmc_on_manifold(&om, &s, Some(&init), &cf).unwrap();
        assert!(out.stats.audited > 100);
        assert!(out.stats.audit_gap.unwrap() < 1e-10, "{:?}", out.stats.audit_gap);
    }

    #[test]
    fn unconstrained_chain() {
        let mut cf = cfg(Target::VandermondeSq);
        cf.m = 2;
        let out = mcmc_on_manifold(&[], &[], None, &cf).unwrap();
        assert_eq!(out.samples.len(), cf.steps);
        let rate = out.stats.acceptance_rate();
        assert!(rate > 0.1 && rate < 0.7, "{rate}");
    }

    #[test]
    fn deterministic() {
        let init = [c(0.1, 0.2), c(-0.3, 0.1), c(0.2, -0.4)];
        let s = power_sums(&init, 1);
        let a = mcmc_on_manifold(&[], &s, Some(&init), &cfg(Target::VandermondeSq)).unwrap();
        let b = mcmc_on_manifold(&[], &s, Some(&init), &cfg(Target::VandermondeSq)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_arguments() {
        let s = [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(mcmc_on_manifold(&[], &s, None, &cfg(Target::VandermondeSq)).is_err());
    }

    // Two free points, one linear constraint: the state is determined by the
    // first point. Visit frequencies of two regions are compared with
    // importance-sampled |V|² integrals over the same chart.
    #[test]
    fn visit_frequencies_match_importance_sampling() {
        let sigma = c(0.1, -0.05);
        let s = [sigma];
        let region = |z: &[Complex64]| -> Option<usize> {
            let a = z.iter().filter(|w| w.re > 0.0).count();
            match a {
                0 | 1 => Some(0),
                _ => Some(1),
            }
        };
        // Importance sampling: free point uniform in the disk.
        let mut rng = stream(77, 1);
        let mut w = [0.0f64; 2];
        let mut w2 = [0.0f64; 2];
        let n_is = 400_000;
        for _ in 0..n_is {
            let f = uniform_in_disk(&mut rng, 1.0);
            let g = sigma - f;
            if g.norm() >= 1.0 {
                continue;
            }
            let z = [f, g];
            let v = log_vandermonde(&z).ln();
            let val = (2.0 * v).exp();
            let r = region(&z).unwrap();
            w[r] += val;
            w2[r] += val * val;
        }
        let tot = w[0] + w[1];
        let p_is = w[1] / tot;
        // Chains.
        let chains = 40;
        let mut counts = Vec::new();
        for ch in 0..chains {
            let mut cf = cfg(Target::VandermondeSq);
            cf.m = 2;
            cf.seed = 1000 + ch;
            cf.steps = 5000;
            let mut hits = 0usize;
            let mut total = 0usize;
            run_chain(&[], &s, None, &cf, |z| {
                total += 1;
                hits += (region(z) == Some(1)) as usize;
            })
            .unwrap();
            counts.push(hits as f64 / total as f64);
        }
        let mean = counts.iter().sum::<f64>() / chains as f64;
        let var = counts.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (chains as f64 - 1.0);
        let se_chain = (var / chains as f64).sqrt();
        // Delta-method error of the importance-sampling ratio.
        let se_is = ((w2[1] * (1.0 - p_is).powi(2) + w2[0] * p_is.powi(2)).sqrt()) / tot;
        let se = (se_chain.powi(2) + se_is.powi(2)).sqrt();
        assert!((mean - p_is).abs() < 3.0 * se, "chain {mean} vs IS {p_is}, se {se}");
    }
}
