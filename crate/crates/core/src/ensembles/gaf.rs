use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use super::{EnsembleKind, EnsembleSample, TAG_GAF};
use crate::error::{Error, Result};
use crate::numerics::{poly_roots, ComplexPoly, DEFAULT_ROOT_TOL};
use crate::rng::{complex_gaussian, stream, substream};

/// Coefficient vectors with |ξ_n| below this are redrawn.
pub const XI_N_FLOOR: f64 = 1e-300;

const MAX_REDRAWS: u32 = 64;

/// The α-GAF polynomial `Σ ξ_k z^k/(k!)^{α/2}` in the rescaled variable
/// `w = z/R`, together with `R`.
///
/// `R = (n!)^{α/(2n)}` makes the first and last weights equal, which keeps
/// every coefficient representable even when `(n!)^{α/2}` is not.
pub fn alpha_gaf_poly(xi: &[Complex64], alpha: f64) -> Result<(ComplexPoly, f64)> {
    let n = xi.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| Error::invalid("need n >= 1"))?;
    let half = 0.5 * alpha;
    let log_r = half * ln_gamma(n as f64 + 1.0) / n as f64;
    let mut lf = 0.0;
    let coeffs = xi
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            if k > 1 {
                lf += (k as f64).ln();
            }
            x * (k as f64 * log_r - half * lf).exp()
        })
        .collect();
    Ok((ComplexPoly::new(coeffs)?, log_r.exp()))
}

/// Draws ξ_0..ξ_n and the zeros of the finite α-GAF.
pub fn sample_alpha_gaf(n: usize, alpha: f64, seed: u64) -> Result<EnsembleSample> {
    sample_alpha_gaf_tol(n, alpha, seed, DEFAULT_ROOT_TOL)
}

pub fn sample_alpha_gaf_tol(n: usize, alpha: f64, seed: u64, tol: f64) -> Result<EnsembleSample> {
    if n == 0 {
        return Err(Error::invalid("alpha-GAF needs n >= 1"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
    }
    let mut redraws = 0;
    let xi = loop {
        let mut rng = stream(seed, substream(&[TAG_GAF, redraws as u64]));
        let xi: Vec<Complex64> = (0..=n).map(|_| complex_gaussian(&mut rng)).collect();
        if xi[n].norm() >= XI_N_FLOOR {
            break xi;
        }
        redraws += 1;
        if redraws > MAX_REDRAWS {
            return Err(Error::invalid("leading coefficient repeatedly negligible"));
        }
    };
    let (poly, r) = alpha_gaf_poly(&xi, alpha)?;
    let points = poly_roots(&poly, tol)?.into_iter().map(|w| w * r).collect();
    Ok(EnsembleSample {
        kind: EnsembleKind::AlphaGaf,
        n,
        alpha: Some(alpha),
        seed,
        coeffs: xi,
        points,
        redraws,
    })
}
