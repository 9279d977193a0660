use num_complex::Complex64;

use super::inner::{log_c_table, shifted_inner, ScaledComplex};
use crate::error::{Error, Result};
use crate::numerics::{canonical_order, elem_sym_all, power_sums, CompensatedSum, ScaledSym};

/// Per-coordinate tolerance for two inside vectors to lie on the same Σ_{m,s}.
pub const MOMENT_TOL: f64 = 1e-9;

/// `Σ_j ln|(ζ0 − ω_j)/ω_j|`, the log of the cross-Vandermonde ratio against the origin.
pub fn cross_log_ratio(zeta0: Complex64, omega: &[Complex64]) -> f64 {
    canonical_order(omega)
        .iter()
        .map(|w| (Complex64::new(1.0, 0.0) - zeta0 / w).norm().ln())
        .collect::<CompensatedSum>()
        .value()
}

/// Bound on `|cross_log_ratio(ζ0, ω)|` uniform over `|ζ0| < r0`:
/// `Σ_{k<r_α} (r0^k/k)·|Σ_j ω_j^{−k}| + (r0^{r_α+1}/θ)·Σ_j |ω_j|^{−r_α}`.
pub fn cross_vandermonde_logbound(omega: &[Complex64], r0: f64, theta: f64, r_alpha: usize) -> Result<f64> {
    if !(theta > 0.0) || !(r0 > 0.0) || r_alpha == 0 {
        return Err(Error::invalid("need θ > 0, r0 > 0 and r_α >= 1"));
    }
    for (index, w) in omega.iter().enumerate() {
        let gap = w.norm() - r0;
        if gap < theta {
            return Err(Error::GapViolation { index, gap, theta });
        }
    }
    let inv: Vec<Complex64> = omega.iter().map(|w| w.inv()).collect();
    let mut bound = CompensatedSum::new();
    if r_alpha > 1 {
        for (k, pk) in power_sums(&inv, r_alpha - 1).iter().enumerate() {
            let k = k + 1;
            bound.add(r0.powi(k as i32) / k as f64 * pk.norm());
        }
    }
    let tail: CompensatedSum = canonical_order(omega).iter().map(|w| w.norm().powi(-(r_alpha as i32))).collect();
    bound.add(r0.powi(r_alpha as i32 + 1) / theta * tail.value());
    Ok(bound.value())
}

/// True when the first `k` power sums of `a` and `b` agree to [`MOMENT_TOL`].
pub fn moments_match(a: &[Complex64], b: &[Complex64], k: usize) -> std::result::Result<(), Error> {
    if a.len() != b.len() {
        return Err(Error::invalid("inside configurations differ in size"));
    }
    if k == 0 {
        return Ok(());
    }
    let (pa, pb) = (power_sums(a, k), power_sums(b, k));
    for (index, (x, y)) in pa.iter().zip(&pb).enumerate() {
        let gap = (x - y).norm();
        if !(gap <= MOMENT_TOL) {
            return Err(Error::MomentMismatch { index, gap });
        }
    }
    Ok(())
}

/// The symmetric-function envelope and the exact ratio `D(ζ′;ω)/D(ζ;ω)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymEnvelope {
    pub fb: f64,
    pub ratio: f64,
}

impl SymEnvelope {
    pub fn holds(&self) -> bool {
        1.0 - self.fb <= self.ratio && self.ratio <= 1.0 + self.fb
    }
}

/// Envelope `|D(ζ′;ω)/D(ζ;ω) − 1| ≤ FB` for ζ, ζ′ with equal rigid moments.
///
/// With `Δ_i = e_i(ζ′) − e_i(ζ)` and shifted outside vectors `E^i`,
/// `FB·D(ζ;ω) = Σ_i |Δ_i|²⟨E^i,E^i⟩ + 2Σ_i |Δ_i|·|⟨E^0(ζ,ω),E^i⟩|
/// + 2Σ_{i<j} |Δ_i||Δ_j|·|⟨E^i,E^j⟩|`, all sums over `1 ≤ i, j ≤ m`.
pub fn sym_ratio_envelope(
    zeta: &[Complex64],
    zeta_new: &[Complex64],
    omega: &[Complex64],
    alpha: f64,
) -> Result<SymEnvelope> {
    moments_match(zeta, zeta_new, crate::r_alpha(alpha) - 1)?;
    let m = zeta.len();
    let n = m + omega.len();
    let log_c = log_c_table(n, alpha);
    let all: Vec<Complex64> = zeta.iter().chain(omega).copied().collect();
    let all_new: Vec<Complex64> = zeta_new.iter().chain(omega).copied().collect();
    let sym = ScaledSym::from_points(&all);
    let sym_new = ScaledSym::with_shift(&all_new, sym.shift.max(ScaledSym::from_points(&all_new).shift));
    let sym_om = ScaledSym::from_points(omega);

    let ln_d = shifted_inner(&sym, 0, &sym, 0, &log_c).ln_abs();
    let ln_d_new = shifted_inner(&sym_new, 0, &sym_new, 0, &log_c).ln_abs();
    let ratio = (ln_d_new - ln_d).exp();

    let (e, e_new) = (elem_sym_all(zeta), elem_sym_all(zeta_new));
    let delta: Vec<f64> = (0..=m).map(|i| (e_new[i] - e[i]).norm()).collect();
    let rel = |z: ScaledComplex| (z.ln_abs() - ln_d).exp();

    let mut fb = CompensatedSum::new();
    for i in 1..=m {
        if delta[i] == 0.0 {
            continue;
        }
        fb.add(delta[i] * delta[i] * rel(shifted_inner(&sym_om, i, &sym_om, i, &log_c)));
        fb.add(2.0 * delta[i] * rel(shifted_inner(&sym, 0, &sym_om, i, &log_c)));
        for j in i + 1..=m {
            if delta[j] > 0.0 {
                fb.add(2.0 * delta[i] * delta[j] * rel(shifted_inner(&sym_om, i, &sym_om, j, &log_c)));
            }
        }
    }
    Ok(SymEnvelope { fb: fb.value(), ratio })
}

/// `|⟨E^i(ω), E^j(ω)⟩| / D(ζ;ω)` for `0 ≤ i ≤ m`, `r_α ≤ j ≤ m`.
pub fn d_ij(zeta: &[Complex64], omega: &[Complex64], alpha: f64, i: usize, j: usize) -> Result<f64> {
    let m = zeta.len();
    let ra = crate::r_alpha(alpha);
    if i > m || j > m || j < ra {
        return Err(Error::invalid(format!("need 0 <= i <= m and r_α <= j <= m (i={i}, j={j}, m={m}, r_α={ra})")));
    }
    let ctx = DijContext::new(zeta, omega, alpha);
    Ok(ctx.d(i, j))
}

/// `max d_ij` over `0 ≤ i ≤ m`, `r_α ≤ j ≤ m`; zero when the range is empty.
pub fn d_hat(zeta: &[Complex64], omega: &[Complex64], alpha: f64) -> f64 {
    let m = zeta.len();
    let ra = crate::r_alpha(alpha);
    let ctx = DijContext::new(zeta, omega, alpha);
    let mut best: f64 = 0.0;
    for i in 0..=m {
        for j in ra..=m {
            best = best.max(ctx.d(i, j));
        }
    }
    best
}

struct DijContext {
    sym_om: ScaledSym,
    log_c: Vec<f64>,
    ln_d: f64,
}

impl DijContext {
    fn new(zeta: &[Complex64], omega: &[Complex64], alpha: f64) -> Self {
        let n = zeta.len() + omega.len();
        let log_c = log_c_table(n, alpha);
        let all: Vec<Complex64> = zeta.iter().chain(omega).copied().collect();
        let sym = ScaledSym::from_points(&all);
        let ln_d = shifted_inner(&sym, 0, &sym, 0, &log_c).ln_abs();
        DijContext { sym_om: ScaledSym::from_points(omega), log_c, ln_d }
    }

    fn d(&self, i: usize, j: usize) -> f64 {
        (shifted_inner(&self.sym_om, i, &self.sym_om, j, &self.log_c).ln_abs() - self.ln_d).exp()
    }
}
