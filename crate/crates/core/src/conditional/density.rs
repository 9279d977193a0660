use num_complex::Complex64;

use super::inner::{log_c_table, shifted_inner};
use crate::ensembles::InsideOutsideSplit;
use crate::numerics::{canonical_order, log_cross_vandermonde, log_vandermonde, CompensatedSum, ScaledSym};

/// `ln D = ln Σ_k |e_k|²/c_k²` for the symmetric functions of a full configuration.
pub fn log_d(all: &ScaledSym, log_c: &[f64]) -> f64 {
    shifted_inner(all, 0, all, 0, log_c).ln_abs()
}

/// Unnormalized conditional log-density of the inside zeros of a finite α-GAF,
/// `2·ln|V(ζ,ω)| − (n+1)·ln D(ζ;ω)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GafCondDensity {
    pub split: InsideOutsideSplit,
    pub alpha: f64,
    pub n: usize,
    pub log_unnorm: f64,
}

impl GafCondDensity {
    pub fn new(split: &InsideOutsideSplit, alpha: f64) -> Self {
        GafCondDensity {
            split: split.clone(),
            alpha,
            n: split.n(),
            log_unnorm: gaf_cond_logdensity(split, alpha),
        }
    }
}

/// Evaluates the conditional log-density from the concatenated configuration.
/// Coincident points give −∞.
pub fn gaf_cond_logdensity(split: &InsideOutsideSplit, alpha: f64) -> f64 {
    let all: Vec<Complex64> = split.inside.iter().chain(&split.outside).copied().collect();
    let n = all.len();
    let lv = log_vandermonde(&all);
    if lv.is_zero() {
        return f64::NEG_INFINITY;
    }
    let log_c = log_c_table(n, alpha);
    2.0 * lv.ln() - (n as f64 + 1.0) * log_d(&ScaledSym::from_points(&all), &log_c)
}

/// Outside-dependent data reused across many inside configurations.
#[derive(Clone, Debug)]
pub struct OutsideCache {
    pub omega: Vec<Complex64>,
    pub alpha: f64,
    pub n: usize,
    sym: ScaledSym,
    log_c: Vec<f64>,
}

impl OutsideCache {
    /// `m` is the number of inside points the cache will be used with.
    pub fn new(omega: &[Complex64], m: usize, alpha: f64) -> Self {
        let n = omega.len() + m;
        OutsideCache {
            omega: canonical_order(omega),
            alpha,
            n,
            sym: ScaledSym::from_points(omega),
            log_c: log_c_table(n, alpha),
        }
    }

    pub fn log_c(&self) -> &[f64] {
        &self.log_c
    }

    /// Symmetric functions of ζ ∪ ω by convolution with the cached e(ω).
    pub fn joint_sym(&self, zeta: &[Complex64]) -> ScaledSym {
        assert_eq!(zeta.len() + self.omega.len(), self.n, "inside size does not match cache");
        let zs = ScaledSym::from_points(zeta);
        let shift = self.sym.shift.max(zs.shift);
        let outer = if shift == self.sym.shift { self.sym.clone() } else { ScaledSym::with_shift(&self.omega, shift) };
        ScaledSym::with_shift(zeta, shift).convolve(&outer)
    }

    pub fn log_d(&self, zeta: &[Complex64]) -> f64 {
        log_d(&self.joint_sym(zeta), &self.log_c)
    }

    /// `2·ln|V(ζ)·V(ζ;ω)| − (n+1)·ln D(ζ;ω)`, i.e. the log-density up to the
    /// ζ-independent factor |V(ω)|².
    pub fn partial_logdensity(&self, zeta: &[Complex64]) -> f64 {
        let v = log_vandermonde(zeta) * log_cross_vandermonde(zeta, &self.omega);
        if v.is_zero() {
            return f64::NEG_INFINITY;
        }
        2.0 * v.ln() - (self.n as f64 + 1.0) * self.log_d(zeta)
    }

    /// `ln ρ(ζ′|ω) − ln ρ(ζ|ω)`; ±∞ when one side is degenerate, NaN when both are.
    pub fn log_ratio(&self, zeta_new: &[Complex64], zeta: &[Complex64]) -> f64 {
        self.partial_logdensity(zeta_new) - self.partial_logdensity(zeta)
    }
}

/// Log ratio of conditional densities from the cached outside route.
pub fn gaf_cond_ratio(zeta_new: &[Complex64], zeta: &[Complex64], omega: &[Complex64], alpha: f64) -> f64 {
    assert_eq!(zeta_new.len(), zeta.len(), "inside configurations differ in size");
    OutsideCache::new(omega, zeta.len(), alpha).log_ratio(zeta_new, zeta)
}

/// `2·ln|V(ζ,ω)| − Σ|ζ_k|²`, the Ginibre conditional log-density up to a constant.
pub fn ginibre_cond_logdensity(split: &InsideOutsideSplit) -> f64 {
    let all: Vec<Complex64> = split.inside.iter().chain(&split.outside).copied().collect();
    let lv = log_vandermonde(&all);
    if lv.is_zero() {
        return f64::NEG_INFINITY;
    }
    let sq: CompensatedSum = canonical_order(&split.inside).iter().map(|z| z.norm_sqr()).collect();
    2.0 * lv.ln() - sq.value()
}
