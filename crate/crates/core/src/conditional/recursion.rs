use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::numerics::{elem_sym_all, ComplexSum};

/// Coefficients `w_r` of `1/Π_i(1 + ζ_i t)`, the weights that express the
/// outside symmetric functions through those of the full configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightRecursion {
    pub w: Vec<Complex64>,
    pub inside_e: Vec<Complex64>,
}

impl WeightRecursion {
    /// Indices `r` with `|w_r| > κ^r`.
    pub fn growth_violations(&self, kappa: f64) -> Vec<usize> {
        self.w
            .iter()
            .enumerate()
            .filter(|(r, w)| w.norm() > kappa.powi(*r as i32))
            .map(|(r, _)| r)
            .collect()
    }
}

/// `w_0 = 1`, `w_r = −Σ_{i=1}^{min(r,m)} e_i(ζ)·w_{r−i}` for `r = 1..=R`.
pub fn weight_recursion(zeta: &[Complex64], depth: usize) -> WeightRecursion {
    let e = elem_sym_all(zeta);
    let m = zeta.len();
    let mut w = Vec::with_capacity(depth + 1);
    w.push(Complex64::new(1.0, 0.0));
    for r in 1..=depth {
        let mut acc = ComplexSum::new();
        for i in 1..=r.min(m) {
            acc.add(-e[i] * w[r - i]);
        }
        w.push(acc.value());
    }
    WeightRecursion { w, inside_e: e }
}

/// `ln π_α[l;r] = (α/2)·ln((l+1)⋯(l+r))`.
pub fn log_pi_alpha(l: usize, r: usize, alpha: f64) -> f64 {
    if r == 0 {
        return 0.0;
    }
    0.5 * alpha * (ln_gamma((l + r) as f64 + 1.0) - ln_gamma(l as f64 + 1.0))
}

/// Terms `(−1)^{n−l−r}·w_r·ξ_{l+r}/π_α[l;r]` for `r = 0..=n−l`; their sum
/// divided by ξ_n equals `e_{n−l}(ω)/c_{n−l}`.
pub fn rec_identity_terms(l: usize, n: usize, weights: &WeightRecursion, xi: &[Complex64], alpha: f64) -> Vec<Complex64> {
    assert!(l <= n && xi.len() == n + 1);
    (0..=n - l)
        .map(|r| {
            let w = weights.w.get(r).copied().unwrap_or_default();
            let t = w * xi[l + r] * (-log_pi_alpha(l, r, alpha)).exp();
            if (n - l - r) % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .collect()
}

/// `T_l = Σ_{r=r_α}^{n−l} (−1)^r w_r ξ_{l+r}/π_α[l;r]`; zero for `l > n − r_α`.
pub fn tail_term(l: usize, n: usize, weights: &WeightRecursion, xi: &[Complex64], alpha: f64) -> Complex64 {
    let ra = crate::r_alpha(alpha);
    if l + ra > n {
        return Complex64::new(0.0, 0.0);
    }
    let mut acc = ComplexSum::new();
    for r in ra..=n - l {
        let w = weights.w.get(r).copied().unwrap_or_default();
        let t = w * xi[l + r] * (-log_pi_alpha(l, r, alpha)).exp();
        acc.add(if r % 2 == 0 { t } else { -t });
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_gaussian, stream};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scalar_recursion() {
        let a = c(0.3, -0.6);
        let w = weight_recursion(&[a], 6);
        for r in 0..=6 {
            assert!((w.w[r] - (-a).powu(r as u32)).norm() < 1e-15);
        }
    }

    #[test]
    fn inverts_the_inside_polynomial() {
        let zeta = [c(0.3, 0.1), c(-0.2, 0.5), c(0.6, -0.4)];
        let w = weight_recursion(&zeta, 10);
        for r in 1..=10 {
            let s: Complex64 = (0..=r.min(3)).map(|i| w.inside_e[i] * w.w[r - i]).sum();
            assert!(s.norm() < 1e-15);
        }
    }

    #[test]
    fn geometric_growth() {
        let mut rng = stream(8, 1);
        for m in 1..6 {
            let zeta: Vec<Complex64> = (0..m).map(|_| crate::rng::uniform_in_disk(&mut rng, 1.5)).collect();
            let w = weight_recursion(&zeta, 60);
            assert!(w.growth_violations(1.5 * (1.0 + m as f64)).is_empty());
        }
    }

    #[test]
    fn pi_alpha_growth() {
        let prod = |l: usize, r: usize, a: f64| ((l + 1..=l + r).map(|i| i as f64).product::<f64>()).powf(a / 2.0);
        assert!((log_pi_alpha(4, 3, 1.0) - prod(4, 3, 1.0).ln()).abs() < 1e-13);
        let ratio = |l: usize| (log_pi_alpha(l, 3, 1.0) - 1.5 * (l as f64).ln()).exp();
        let (a, b, cc) = (ratio(100), ratio(1000), ratio(10000));
        assert!(a > b && b > cc && cc > 1.0 && cc - 1.0 < 1e-3);
    }

    #[test]
    fn tail_conventions_and_brute_force() {
        let mut rng = stream(6, 2);
        let n = 12;
        let alpha = 0.5;
        let xi: Vec<Complex64> = (0..=n).map(|_| complex_gaussian(&mut rng)).collect();
        let w = weight_recursion(&[c(0.2, 0.3), c(-0.5, 0.1)], n);
        assert_eq!(tail_term(n - 2, n, &w, &xi, alpha), c(0., 0.));
        assert_eq!(tail_term(n, n, &w, &xi, alpha), c(0., 0.));
        let l = 4;
        let mut want = c(0., 0.);
        for r in 3..=n - l {
            let pi: f64 = (l + 1..=l + r).map(|i| (i as f64).powf(alpha / 2.0)).product();
            want += (-1f64).powi(r as i32) * w.w[r] * xi[l + r] / pi;
        }
        assert!((tail_term(l, n, &w, &xi, alpha) - want).norm() < 1e-10);
    }
}
