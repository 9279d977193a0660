//! Polynomial roots, symmetric functions and log-domain products.

mod logmag;
mod poly;
mod sum;
mod symmetric;

pub use logmag::{
    log_binom_kfact_alpha, log_cross_vandermonde, log_energy, log_factorials, log_vandermonde,
    LogMagnitude,
};
pub use poly::{poly_roots, ComplexPoly, DEFAULT_ROOT_TOL};
pub use sum::{log_sum_exp, CompensatedSum, ComplexSum};
pub use symmetric::{
    canonical_order, elem_sym_all, newton_e_from_p, newton_e_from_p_checked, power_sums,
    ConditioningWarning, ScaledSym, SymmetricData,
};
