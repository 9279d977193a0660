//! Conditional densities of the inside zeros given the outside zeros, and
//! explicit envelopes for their ratios.

mod density;
mod envelope;
mod inner;
mod recursion;

pub use density::{
    gaf_cond_logdensity, gaf_cond_ratio, ginibre_cond_logdensity, log_d, GafCondDensity, OutsideCache,
};
pub use envelope::{
    cross_log_ratio, cross_vandermonde_logbound, d_hat, d_ij, moments_match, sym_ratio_envelope, SymEnvelope,
    MOMENT_TOL,
};
pub use inner::{log_c_table, ScaledComplex};
pub use recursion::{log_pi_alpha, rec_identity_terms, tail_term, weight_recursion, WeightRecursion};
