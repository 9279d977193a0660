use num_complex::Complex64;
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Gamma};

use super::{complex_eigenvalues, EnsembleKind, EnsembleSample, PointConfiguration, TAG_GINIBRE, TAG_ORACLE};
use crate::error::{Error, Result};
use crate::numerics::{canonical_order, log_vandermonde, CompensatedSum};
use crate::rng::{complex_gaussian, stream, substream};

/// Minimum Metropolis steps per point for [`mcmc_ginibre_oracle`].
pub const ORACLE_BURN_IN_PER_POINT: usize = 50;

const ORACLE_STEP: f64 = 0.5;

/// Eigenvalues of an `n × n` matrix of i.i.d. standard complex Gaussians.
pub fn sample_ginibre(n: usize, seed: u64) -> Result<EnsembleSample> {
    if n == 0 {
        return Err(Error::invalid("Ginibre needs n >= 1"));
    }
    let mut rng = stream(seed, substream(&[TAG_GINIBRE]));
    let a: Vec<Complex64> = (0..n * n).map(|_| complex_gaussian(&mut rng)).collect();
    let points = complex_eigenvalues(a, n)?;
    Ok(EnsembleSample {
        kind: EnsembleKind::Ginibre,
        n,
        alpha: None,
        seed,
        coeffs: Vec::new(),
        points,
        redraws: 0,
    })
}

/// `log(exp(−Σ|z|²)·|V(z)|²)`, the unnormalized Ginibre joint density.
pub fn ginibre_log_density(points: &[Complex64]) -> f64 {
    let sq: CompensatedSum = canonical_order(points).iter().map(|z| z.norm_sqr()).collect();
    2.0 * log_vandermonde(points).ln() - sq.value()
}

/// Single-site random-walk Metropolis chain on the Ginibre joint density.
///
/// Intended only as an independent distributional cross-check of
/// [`sample_ginibre`].
pub fn mcmc_ginibre_oracle(n: usize, steps: usize, seed: u64) -> Result<PointConfiguration> {
    if n == 0 {
        return Err(Error::invalid("oracle needs n >= 1"));
    }
    if steps < ORACLE_BURN_IN_PER_POINT * n {
        return Err(Error::invalid(format!(
            "oracle needs at least {} steps for n = {n}",
            ORACLE_BURN_IN_PER_POINT * n
        )));
    }
    let mut rng = stream(seed, substream(&[TAG_ORACLE]));
    let mut z: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let prop = z[i] + complex_gaussian(&mut rng) * ORACLE_STEP;
        let mut log_ratio = z[i].norm_sqr() - prop.norm_sqr();
        for (j, w) in z.iter().enumerate() {
            if j != i {
                log_ratio += 2.0 * ((prop - w).norm().ln() - (z[i] - w).norm().ln());
            }
        }
        let u: f64 = rng.gen();
        if u.ln() < log_ratio {
            z[i] = prop;
        }
    }
    Ok(PointConfiguration { points: z, r0: None })
}

/// Expected number of Ginibre eigenvalues in the disk of radius `r`,
/// `Σ_{k<n} P(Gamma(k+1, 1) ≤ r²)`.
pub fn ginibre_mean_count(n: usize, r: f64) -> f64 {
    (0..n)
        .map(|k| Gamma::new(k as f64 + 1.0, 1.0).expect("valid shape").cdf(r * r))
        .collect::<CompensatedSum>()
        .value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::summarize;

    #[test]
    fn single_entry() {
        let s = sample_ginibre(1, 77).unwrap();
        let mut rng = stream(77, substream(&[TAG_GINIBRE]));
        assert_eq!(s.points, vec![complex_gaussian(&mut rng)]);
    }

    #[test]
    fn trace_matches_eigenvalue_sum() {
        for seed in 0..5 {
            let n = 40;
            let s = sample_ginibre(n, seed).unwrap();
            let mut rng = stream(seed, substream(&[TAG_GINIBRE]));
            let a: Vec<Complex64> = (0..n * n).map(|_| complex_gaussian(&mut rng)).collect();
            let trace: Complex64 = (0..n).map(|i| a[i * n + i]).sum();
            let sum: Complex64 = s.points.iter().sum();
            assert!((sum - trace).norm() <= 1e-9 * trace.norm().max(1.0));
        }
    }

    #[test]
    fn mean_count_oracle() {
        // Series form of the incomplete gamma function, independent of statrs.
        let series = |n: usize, r2: f64| -> f64 {
            (0..n)
                .map(|k| {
                    let mut term = 1.0;
                    let mut tail = 1.0;
                    for i in 1..=k {
                        term *= r2 / i as f64;
                        tail += term;
                    }
                    1.0 - (-r2).exp() * tail
                })
                .sum()
        };
        for &n in &[1usize, 5, 128] {
            assert!((ginibre_mean_count(n, 1.0) - series(n, 1.0)).abs() < 1e-12);
        }
        assert!((ginibre_mean_count(1, 1.0) - (1.0 - (-1f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn mean_count_in_unit_disk() {
        let n = 32;
        let trials = 300;
        let counts: Vec<f64> = (0..trials)
            .map(|t| {
                let s = sample_ginibre(n, substream(&[42, t])).unwrap();
                s.points.iter().filter(|z| z.norm() < 1.0).count() as f64
            })
            .collect();
        let s = summarize(&counts);
        assert!((s.mean - ginibre_mean_count(n, 1.0)).abs() < 3.0 * s.stderr + 1e-12);
    }

    #[test]
    fn oracle_permutation_ratio_is_one() {
        let s = sample_ginibre(6, 3).unwrap();
        let mut p = s.points.clone();
        p.swap(0, 4);
        assert_eq!(ginibre_log_density(&p) - ginibre_log_density(&s.points), 0.0);
    }

    #[test]
    fn oracle_single_point_is_gaussian() {
        let vals: Vec<f64> = (0..2000)
            .map(|t| mcmc_ginibre_oracle(1, 200, t).unwrap().points[0].norm_sqr())
            .collect();
        let s = summarize(&vals);
        assert!((s.mean - 1.0).abs() < 3.0 * s.stderr);
    }

    #[test]
    fn oracle_rejects_short_chains() {
        assert!(mcmc_ginibre_oracle(4, 10, 0).is_err());
        assert!(mcmc_ginibre_oracle(0, 1000, 0).is_err());
    }
}
