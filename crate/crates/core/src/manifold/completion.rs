use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ensembles::MomentVector;
use crate::error::{Error, Result};
use crate::numerics::{newton_e_from_p, poly_roots, power_sums, ComplexPoly, DEFAULT_ROOT_TOL};
use crate::rng::uniform_in_disk;

/// Largest accepted per-coordinate error in the prescribed power sums.
pub const COMPLETION_TOL: f64 = 1e-9;

/// A point of Σ_{m,s}: free coordinates plus the points solved for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedConfig {
    pub free: Vec<Complex64>,
    pub completed: Vec<Complex64>,
    pub s: MomentVector,
    pub r0: f64,
}

impl ConstrainedConfig {
    pub fn points(&self) -> Vec<Complex64> {
        self.free.iter().chain(&self.completed).copied().collect()
    }
}

/// Result of solving for the constrained points.
#[derive(Clone, Debug, PartialEq)]
pub enum Completion {
    Accepted(Vec<Complex64>),
    /// Some solved point falls outside the open disk.
    OutsideDisk,
    /// The solved points miss the power sums by more than [`COMPLETION_TOL`].
    Inaccurate(f64),
}

/// Solves for `k = len(s)` points so that `free ∪ completed` has power sums `s`.
pub fn complete_configuration(free: &[Complex64], s: &[Complex64], r0: f64) -> Result<Completion> {
    let k = s.len();
    if k == 0 {
        return Err(Error::invalid("completion needs at least one prescribed moment"));
    }
    let have = power_sums(free, k);
    let need: Vec<Complex64> = s.iter().zip(&have).map(|(a, b)| a - b).collect();
    let e = newton_e_from_p(&need);
    // Monic polynomial with roots whose elementary symmetric functions are e.
    let mut coeffs = vec![Complex64::new(1.0, 0.0); k + 1];
    for i in 1..=k {
        coeffs[k - i] = if i % 2 == 0 { e[i - 1] } else { -e[i - 1] };
    }
    let roots = poly_roots(&ComplexPoly::new(coeffs)?, DEFAULT_ROOT_TOL)?;
    if roots.iter().any(|z| !(z.norm() < r0)) {
        return Ok(Completion::OutsideDisk);
    }
    let all: Vec<Complex64> = free.iter().chain(&roots).copied().collect();
    let got = power_sums(&all, k);
    let err = got.iter().zip(s).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if err > COMPLETION_TOL {
        return Ok(Completion::Inaccurate(err));
    }
    Ok(Completion::Accepted(roots))
}

/// Draws free points uniformly in the disk until the completion lands inside.
pub fn random_on_manifold<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    s: &[Complex64],
    r0: f64,
    max_attempts: usize,
) -> Result<Vec<Complex64>> {
    let k = s.len();
    if m < k {
        return Err(Error::invalid("fewer points than prescribed moments"));
    }
    for _ in 0..max_attempts {
        let free: Vec<Complex64> = (0..m - k).map(|_| uniform_in_disk(rng, r0)).collect();
        if k == 0 {
            return Ok(free);
        }
        if let Completion::Accepted(c) = complete_configuration(&free, s, r0)? {
            return Ok(free.into_iter().chain(c).collect());
        }
    }
    Err(Error::invalid(format!("no configuration on the constraint set found in {max_attempts} attempts")))
}
