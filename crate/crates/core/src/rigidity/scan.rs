use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::partition::smooth_step;
use crate::ensembles::{sample_alpha_gaf, sample_ginibre, EnsembleKind};
use crate::error::{Error, Result};
use crate::numerics::{canonical_order, ComplexSum, CompensatedSum};
use crate::rng::substream;

/// Cutoff equal to 1 on `|z| ≤ r0` and 0 on `|z| ≥ R`, smooth in `ln|z|`.
pub fn log_ramp_cutoff(r: f64, r0: f64, big_r: f64, sharpness: f64) -> f64 {
    1.0 - smooth_step((r / r0).ln() / (big_r / r0).ln(), sharpness)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub kind: EnsembleKind,
    pub alpha: f64,
    pub n_grid: Vec<usize>,
    pub r_grid: Vec<f64>,
    pub orders: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub r0: f64,
    pub sharpness: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub kind: EnsembleKind,
    pub alpha: f64,
    pub n: usize,
    #[serde(rename = "R")]
    pub r: f64,
    pub order: usize,
    pub trials: usize,
    pub variance: f64,
    pub stderr: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
}

/// Verdict of the level-of-rigidity detector for one order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decay {
    pub factor: f64,
    pub separated: bool,
}

impl ScanTable {
    fn row(&self, n: usize, order: usize, r: f64) -> Option<&ScanRow> {
        self.rows.iter().find(|x| x.n == n && x.order == order && x.r == r)
    }

    /// Variance ratio between the smallest and largest R, and whether the
    /// 2σ intervals at those radii are disjoint.
    pub fn decay(&self, n: usize, order: usize) -> Option<Decay> {
        let rs: Vec<f64> = self.rows.iter().filter(|x| x.n == n && x.order == order).map(|x| x.r).collect();
        let lo = rs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = rs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (a, b) = (self.row(n, order, lo)?, self.row(n, order, hi)?);
        Some(Decay {
            factor: a.variance / b.variance,
            separated: a.variance - 2.0 * a.stderr > b.variance + 2.0 * b.stderr,
        })
    }

    /// The heuristic detector: variance falls by at least `factor` with
    /// disjoint 2σ bars.
    pub fn rigid_consistent(&self, n: usize, order: usize, factor: f64) -> Option<bool> {
        self.decay(n, order).map(|d| d.factor >= factor && d.separated)
    }
}

/// Monte Carlo variance of `Σ_z z^j·χ_R(z)` over the zeros, for every
/// combination of `n`, `R` and order `j`. The same samples serve all `R`
/// and `j` at a given `n`.
pub fn rigidity_scan(cfg: &ScanConfig) -> Result<ScanTable> {
    if cfg.trials < 2 {
        return Err(Error::invalid("rigidity scan needs at least 2 trials"));
    }
    if cfg.r_grid.iter().any(|&r| !(r > cfg.r0)) || cfg.r_grid.is_empty() {
        return Err(Error::invalid("every R must exceed r0"));
    }
    if cfg.n_grid.is_empty() || cfg.orders.is_empty() {
        return Err(Error::invalid("empty n grid or order set"));
    }
    let mut rows = Vec::new();
    for &n in &cfg.n_grid {
        let stats: Vec<Vec<Complex64>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| -> Result<Vec<Complex64>> {
                let seed = substream(&[cfg.seed, n as u64, t as u64]);
                let sample = match cfg.kind {
                    EnsembleKind::AlphaGaf => sample_alpha_gaf(n, cfg.alpha, seed)?,
                    EnsembleKind::Ginibre => sample_ginibre(n, seed)?,
                };
                let pts = canonical_order(&sample.points);
                let mut out = Vec::with_capacity(cfg.r_grid.len() * cfg.orders.len());
                for &big_r in &cfg.r_grid {
                    for &j in &cfg.orders {
                        let s: ComplexSum = pts
                            .iter()
                            .map(|z| z.powu(j as u32) * log_ramp_cutoff(z.norm(), cfg.r0, big_r, cfg.sharpness))
                            .collect();
                        out.push(s.value());
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut col = 0;
        for &big_r in &cfg.r_grid {
            for &order in &cfg.orders {
                let xs: Vec<Complex64> = stats.iter().map(|v| v[col]).collect();
                let (variance, stderr) = complex_variance(&xs);
                rows.push(ScanRow {
                    kind: cfg.kind,
                    alpha: cfg.alpha,
                    n,
                    r: big_r,
                    order,
                    trials: cfg.trials,
                    variance,
                    stderr,
                    seed: cfg.seed,
                });
                col += 1;
            }
        }
    }
    Ok(ScanTable { rows })
}

// E|X − EX|² and its standard error, from the squared deviations.
fn complex_variance(xs: &[Complex64]) -> (f64, f64) {
    let t = xs.len() as f64;
    let mean = xs.iter().copied().collect::<ComplexSum>().value() / t;
    let d: Vec<f64> = xs.iter().map(|x| (x - mean).norm_sqr()).collect();
    let md = d.iter().copied().collect::<CompensatedSum>().value() / t;
    let var_d = d.iter().map(|v| (v - md).powi(2)).collect::<CompensatedSum>().value() / (t - 1.0);
    let bessel = t / (t - 1.0);
    (bessel * md, bessel * (var_d / t).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ScanConfig {
        ScanConfig {
            kind: EnsembleKind::AlphaGaf,
            alpha: 1.0,
            n_grid: vec![32],
            r_grid: vec![2.0, 3.0],
            orders: vec![0, 1],
            trials: 20,
            seed: 5,
            r0: 1.0,
            sharpness: 1.0,
        }
    }

    #[test]
    fn cutoff_shape() {
        assert_eq!(log_ramp_cutoff(0.5, 1.0, 3.0, 1.0), 1.0);
        assert_eq!(log_ramp_cutoff(3.5, 1.0, 3.0, 1.0), 0.0);
        assert!((log_ramp_cutoff(3f64.sqrt(), 1.0, 3.0, 1.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn too_few_trials() {
        assert!(rigidity_scan(&ScanConfig { trials: 0, ..cfg() }).is_err());
        assert!(rigidity_scan(&ScanConfig { trials: 1, ..cfg() }).is_err());
        assert!(rigidity_scan(&ScanConfig { r_grid: vec![0.5], ..cfg() }).is_err());
    }

    #[test]
    fn table_shape_and_determinism() {
        let a = rigidity_scan(&cfg()).unwrap();
        assert_eq!(a.rows.len(), 4);
        assert!(a.rows.iter().all(|r| r.variance > 0.0 && r.stderr > 0.0));
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| rigidity_scan(&cfg()).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn variance_of_known_data() {
        let xs = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];
        let (v, _) = complex_variance(&xs);
        assert!((v - 4.0 / 3.0).abs() < 1e-15);
    }
}
