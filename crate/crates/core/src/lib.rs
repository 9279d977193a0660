//! Finite-dimensional α-GAF and Ginibre zero ensembles, their conditional
//! densities on moment manifolds, and the statistics used to probe rigidity
//! and generalized Gibbs structure numerically.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: polynomial roots, symmetric functions, log-domain products.
//! * [`ensembles`]: seeded samplers and the inside/outside split of a disk.
//! * [`conditional`]: conditional log-densities and explicit ratio envelopes.
//! * [`rigidity`]: partition of unity, inverse power sums, Q-functionals,
//!   event predicates and the variance scan.
//! * [`manifold`]: completion onto moment constraints and Metropolis chains
//!   on the constrained set.

pub mod conditional;
pub mod ensembles;
pub mod error;
pub mod manifold;
pub mod numerics;
pub mod rigidity;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// `1 + floor(1/α)`: one more than the number of rigid moments of the α-GAF zeros.
pub fn r_alpha(alpha: f64) -> usize {
    1 + floor_ratio(1.0, alpha)
}

/// `1 + floor(2/α)`: the first absolutely summable inverse power.
pub fn s_alpha(alpha: f64) -> usize {
    1 + floor_ratio(2.0, alpha)
}

// 1/α is evaluated in floating point; a relative nudge keeps α = 1/3 from
// landing on 2.999...
fn floor_ratio(num: f64, alpha: f64) -> usize {
    assert!(alpha > 0.0 && alpha.is_finite(), "alpha must be positive, got {alpha}");
    let q = num / alpha;
    (q * (1.0 + 1e-12)).floor() as usize
}
