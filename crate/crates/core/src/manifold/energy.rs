use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::completion::{complete_configuration, random_on_manifold, Completion};
use crate::conditional::OutsideCache;
use crate::error::{Error, Result};
use crate::numerics::log_energy;
use crate::rng::{complex_gaussian, stream, substream};

const TAG_ENERGY: u64 = 12;
const DRAW_ATTEMPTS: usize = 100_000;

/// How each pair on Σ_{m,s} is produced.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    /// Free points uniform in the disk, independently for both members.
    Uniform,
    /// A uniform pair refined by `steps` greedy single-point moves that
    /// increase the defect, with step size shrinking from `0.3·r0`.
    Ascent { steps: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub pairs: usize,
    /// Largest `|Δ ln ρ| − 2·|Δ E_log|` over all pairs.
    pub max_defect: f64,
    /// Running maximum after 1, 2, 4, … pairs and after the last pair.
    pub growth: Vec<(usize, f64)>,
}

impl EnergyReport {
    /// Running maximum after the first `pairs` pairs, if recorded.
    pub fn max_after(&self, pairs: usize) -> Option<f64> {
        self.growth.iter().find(|(k, _)| *k == pairs).map(|(_, v)| *v)
    }

    /// Relative change of the running maximum between `pairs/2` and `pairs`.
    pub fn last_doubling_change(&self) -> Option<f64> {
        let (a, b) = (self.max_after(self.pairs / 2)?, self.max_after(self.pairs)?);
        Some((b - a).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE))
    }
}

/// Defect of one pair.
pub fn energy_defect(cache: &OutsideCache, zeta: &[Complex64], zeta_new: &[Complex64]) -> f64 {
    let dr = cache.log_ratio(zeta_new, zeta);
    let de = log_energy(zeta_new) - log_energy(zeta);
    dr.abs() - 2.0 * de.abs()
}

struct Member {
    z: Vec<Complex64>,
    log_rho: f64,
    energy: f64,
}

impl Member {
    fn new(cache: &OutsideCache, z: Vec<Complex64>) -> Self {
        Member { log_rho: cache.partial_logdensity(&z), energy: log_energy(&z), z }
    }
}

fn defect(a: &Member, b: &Member) -> f64 {
    (b.log_rho - a.log_rho).abs() - 2.0 * (b.energy - a.energy).abs()
}

fn perturb<R: Rng + ?Sized>(rng: &mut R, z: &[Complex64], s: &[Complex64], r0: f64, step: f64) -> Result<Option<Vec<Complex64>>> {
    let (m, k) = (z.len(), s.len());
    let i = rng.gen_range(0..m - k);
    let mut w = z.to_vec();
    w[i] += complex_gaussian(rng) * step;
    if !(w[i].norm() < r0) {
        return Ok(None);
    }
    if k > 0 {
        match complete_configuration(&w[..m - k], s, r0) {
            Ok(Completion::Accepted(c)) => w[m - k..].copy_from_slice(&c),
            Ok(_) | Err(Error::RootNonConvergence { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(w))
}

/// Tracks the worst relative-energy defect over `pair_count` pairs on
/// Σ_{m,s} ∩ D^m. Pair `i` depends only on `(seed, i)`.
#[allow(clippy::too_many_arguments)]
pub fn relative_energy_check(
    omega: &[Complex64],
    m: usize,
    s: &[Complex64],
    alpha: f64,
    r0: f64,
    pair_count: usize,
    mode: PairMode,
    seed: u64,
) -> Result<EnergyReport> {
    if pair_count == 0 {
        return Err(Error::invalid("pair_count must be at least 1"));
    }
    if m <= s.len() {
        return Err(Error::invalid("need more points than prescribed moments"));
    }
    let cache = OutsideCache::new(omega, m, alpha);
    let mut max = f64::NEG_INFINITY;
    let mut growth = Vec::new();
    for i in 0..pair_count {
        let mut rng = stream(seed, substream(&[TAG_ENERGY, i as u64]));
        let mut a = Member::new(&cache, random_on_manifold(&mut rng, m, s, r0, DRAW_ATTEMPTS)?);
        let mut b = Member::new(&cache, random_on_manifold(&mut rng, m, s, r0, DRAW_ATTEMPTS)?);
        let mut d = defect(&a, &b);
        if let PairMode::Ascent { steps } = mode {
            for t in 0..steps {
                let step = 0.3 * r0 * (0.01f64).powf(t as f64 / steps.max(1) as f64);
                let first = rng.gen::<bool>();
                let src = if first { &a.z } else { &b.z };
                let Some(w) = perturb(&mut rng, src, s, r0, step)? else { continue };
                let cand = Member::new(&cache, w);
                let nd = if first { defect(&cand, &b) } else { defect(&a, &cand) };
                if nd > d {
                    d = nd;
                    if first {
                        a = cand;
                    } else {
                        b = cand;
                    }
                }
            }
        }
        if d > max {
            max = d;
        }
        let done = i + 1;
        if done.is_power_of_two() || done == pair_count || done * 2 == pair_count {
            growth.push((done, max));
        }
    }
    Ok(EnergyReport { pairs: pair_count, max_defect: max, growth })
}
