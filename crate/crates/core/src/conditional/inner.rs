use num_complex::Complex64;
use std::f64::consts::LN_2;

use crate::numerics::{log_factorials, ComplexSum, ScaledSym};

/// `mant · e^{log_scale}`; lets sums of astronomically large terms keep
/// their phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledComplex {
    pub mant: Complex64,
    pub log_scale: f64,
}

impl ScaledComplex {
    pub fn ln_abs(&self) -> f64 {
        let a = self.mant.norm();
        if a == 0.0 {
            f64::NEG_INFINITY
        } else {
            a.ln() + self.log_scale
        }
    }

    /// Sum of `z_t·e^{l_t}` with the largest magnitude factored out.
    pub fn sum(terms: &[(Complex64, f64)]) -> Self {
        let top = terms
            .iter()
            .filter(|(z, _)| z.norm() > 0.0)
            .map(|(z, l)| z.norm().ln() + l)
            .fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return ScaledComplex { mant: Complex64::new(0.0, 0.0), log_scale: 0.0 };
        }
        let mut acc = ComplexSum::new();
        for &(z, l) in terms {
            if z.norm() > 0.0 {
                acc.add(z * (l - top).exp());
            }
        }
        ScaledComplex { mant: acc.value(), log_scale: top }
    }
}

/// `ln c_k = (α/2)·ln(n!/(n−k)!)` for `k = 0..=n`.
pub fn log_c_table(n: usize, alpha: f64) -> Vec<f64> {
    let lf = log_factorials(n);
    (0..=n).map(|k| 0.5 * alpha * (lf[n] - lf[n - k])).collect()
}

/// `⟨E^{(i)}(x), E^{(j)}(y)⟩ = Σ_k conj(e_{k−i}(x))·e_{k−j}(y) / c_k²`,
/// where out-of-range symmetric functions are zero.
pub(crate) fn shifted_inner(x: &ScaledSym, i: usize, y: &ScaledSym, j: usize, log_c: &[f64]) -> ScaledComplex {
    let n = log_c.len() - 1;
    let lo = i.max(j);
    let hi = n.min(i + x.degree()).min(j + y.degree());
    if lo > hi {
        return ScaledComplex { mant: Complex64::new(0.0, 0.0), log_scale: 0.0 };
    }
    let (sx, sy) = (x.shift as f64 * LN_2, y.shift as f64 * LN_2);
    let terms: Vec<(Complex64, f64)> = (lo..=hi)
        .map(|k| {
            let (a, b) = (x.scaled[k - i], y.scaled[k - j]);
            let (na, nb) = (a.norm(), b.norm());
            if na == 0.0 || nb == 0.0 {
                return (Complex64::new(0.0, 0.0), 0.0);
            }
            // Unit factors keep tiny mantissa products from underflowing.
            let z = (a / na).conj() * (b / nb);
            (z, na.ln() + nb.ln() + sx * (k - i) as f64 + sy * (k - j) as f64 - 2.0 * log_c[k])
        })
        .collect();
    ScaledComplex::sum(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::elem_sym_all;

    #[test]
    fn tiny_mantissas_do_not_poison_the_sum() {
        let pts: Vec<Complex64> = (0..127)
            .map(|k| Complex64::from_polar(0.5 + 0.01 * k as f64, 0.3 * k as f64))
            .chain([Complex64::new(90.0, 30.0)])
            .collect();
        let s = ScaledSym::from_points(&pts);
        let v = shifted_inner(&s, 0, &s, 0, &log_c_table(128, 1.0)).ln_abs();
        assert!(v.is_finite(), "{v}");
    }

    #[test]
    fn scaled_sum_keeps_phase() {
        let s = ScaledComplex::sum(&[(Complex64::new(0.0, 1.0), 800.0), (Complex64::new(0.0, 1.0), 800.0)]);
        assert!((s.ln_abs() - (800.0 + 2f64.ln())).abs() < 1e-12);
        assert!(s.mant.re.abs() < 1e-15 && s.mant.im > 0.0);
        assert_eq!(ScaledComplex::sum(&[]).ln_abs(), f64::NEG_INFINITY);
    }

    #[test]
    fn inner_matches_brute_force() {
        let c = |a: f64, b: f64| Complex64::new(a, b);
        let x = [c(0.3, 0.1), c(-0.5, 0.2)];
        let y = [c(2.0, 1.0), c(-1.5, 3.0), c(0.0, -2.5)];
        let n = 5;
        let alpha = 0.7;
        let lc = log_c_table(n, alpha);
        let ex = elem_sym_all(&x);
        let ey = elem_sym_all(&y);
        let sx = ScaledSym::from_points(&x);
        let sy = ScaledSym::from_points(&y);
        for i in 0..=3 {
            for j in 0..=3 {
                let mut want = c(0., 0.);
                for k in 0..=n {
                    let a = if k >= i && k - i < ex.len() { ex[k - i] } else { c(0., 0.) };
                    let b = if k >= j && k - j < ey.len() { ey[k - j] } else { c(0., 0.) };
                    want += a.conj() * b / (2.0 * lc[k]).exp();
                }
                let got = shifted_inner(&sx, i, &sy, j, &lc);
                let got = got.mant * got.log_scale.exp();
                assert!((got - want).norm() <= 1e-13 * want.norm().max(1e-300), "{i} {j}");
            }
        }
    }
}
