//! Seeded samplers for finite Ginibre and α-GAF zero ensembles.

mod eigen;
mod gaf;
mod ginibre;
mod split;

pub use eigen::complex_eigenvalues;
pub use gaf::{alpha_gaf_poly, sample_alpha_gaf, sample_alpha_gaf_tol, XI_N_FLOOR};
pub use ginibre::{
    ginibre_log_density, ginibre_mean_count, mcmc_ginibre_oracle, sample_ginibre, ORACLE_BURN_IN_PER_POINT,
};
pub use split::{moment_vector, split_disk, split_points, InsideOutsideSplit, MomentVector};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    AlphaGaf,
    Ginibre,
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EnsembleKind::AlphaGaf => "alpha_gaf",
            EnsembleKind::Ginibre => "ginibre",
        })
    }
}

/// One draw from an ensemble together with everything needed to redraw it.
///
/// For the α-GAF, `coeffs` holds the raw Gaussians ξ_0..ξ_n; the factorial
/// weights enter only when the polynomial is formed. Ginibre samples carry
/// no coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSample {
    pub kind: EnsembleKind,
    pub n: usize,
    pub alpha: Option<f64>,
    pub seed: u64,
    pub coeffs: Vec<Complex64>,
    pub points: Vec<Complex64>,
    /// Number of coefficient vectors discarded because ξ_n was negligible.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub redraws: u32,
}

fn is_zero(x: &u32) -> bool {
    *x == 0
}

/// A finite configuration, optionally tagged with the disk it lives in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub points: Vec<Complex64>,
    pub r0: Option<f64>,
}

// Stream tags keep the samplers' random streams apart for equal seeds.
const TAG_GAF: u64 = 1;
const TAG_GINIBRE: u64 = 2;
const TAG_ORACLE: u64 = 3;
