use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;
use std::ops::{Div, Mul};

use super::sum::CompensatedSum;
use super::symmetric::canonical_order;

/// A nonnegative real stored as its logarithm, with an explicit zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogMagnitude {
    log_value: f64,
    is_zero: bool,
}

impl LogMagnitude {
    pub const ZERO: LogMagnitude = LogMagnitude { log_value: 0.0, is_zero: true };
    pub const ONE: LogMagnitude = LogMagnitude { log_value: 0.0, is_zero: false };

    pub fn from_log(log_value: f64) -> Self {
        if log_value == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogMagnitude { log_value, is_zero: false }
        }
    }

    pub fn from_abs(x: f64) -> Self {
        debug_assert!(x >= 0.0);
        if x == 0.0 {
            Self::ZERO
        } else {
            LogMagnitude { log_value: x.ln(), is_zero: false }
        }
    }

    pub fn is_zero(self) -> bool {
        self.is_zero
    }

    /// The logarithm, or `None` for zero.
    pub fn log_value(self) -> Option<f64> {
        (!self.is_zero).then_some(self.log_value)
    }

    /// The logarithm with zero mapped to −∞.
    pub fn ln(self) -> f64 {
        if self.is_zero {
            f64::NEG_INFINITY
        } else {
            self.log_value
        }
    }

    pub fn value(self) -> f64 {
        self.ln().exp()
    }

    pub fn powi(self, k: i32) -> Self {
        if self.is_zero {
            if k == 0 {
                Self::ONE
            } else {
                Self::ZERO
            }
        } else {
            LogMagnitude { log_value: self.log_value * k as f64, is_zero: false }
        }
    }

    /// Division; `None` when dividing by zero.
    pub fn checked_div(self, rhs: Self) -> Option<Self> {
        if rhs.is_zero {
            None
        } else if self.is_zero {
            Some(Self::ZERO)
        } else {
            Some(LogMagnitude { log_value: self.log_value - rhs.log_value, is_zero: false })
        }
    }
}

impl Mul for LogMagnitude {
    type Output = LogMagnitude;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero || rhs.is_zero {
            Self::ZERO
        } else {
            LogMagnitude { log_value: self.log_value + rhs.log_value, is_zero: false }
        }
    }
}

impl Div for LogMagnitude {
    type Output = LogMagnitude;
    /// Panics on division by zero; use [`LogMagnitude::checked_div`] otherwise.
    fn div(self, rhs: Self) -> Self {
        self.checked_div(rhs).expect("LogMagnitude division by zero")
    }
}

/// `|V(x)| = Π_{i<j} |x_i − x_j|` in the log domain.
pub fn log_vandermonde(points: &[Complex64]) -> LogMagnitude {
    let pts = canonical_order(points);
    let mut acc = CompensatedSum::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = (pts[i] - pts[j]).norm();
            if d == 0.0 {
                return LogMagnitude::ZERO;
            }
            acc.add(d.ln());
        }
    }
    LogMagnitude::from_log(acc.value())
}

/// `Π_{i,j} |x_i − y_j|` in the log domain.
pub fn log_cross_vandermonde(x: &[Complex64], y: &[Complex64]) -> LogMagnitude {
    let xs = canonical_order(x);
    let ys = canonical_order(y);
    let mut acc = CompensatedSum::new();
    for a in &xs {
        for b in &ys {
            let d = (a - b).norm();
            if d == 0.0 {
                return LogMagnitude::ZERO;
            }
            acc.add(d.ln());
        }
    }
    LogMagnitude::from_log(acc.value())
}

/// Logarithmic energy `Σ_{i≠j} log(1/|x_i − x_j|)` over ordered pairs.
///
/// Returns `+∞` when two points coincide. Fewer than two points give 0.
pub fn log_energy(points: &[Complex64]) -> f64 {
    match log_vandermonde(points).log_value() {
        Some(l) => -2.0 * l,
        None => f64::INFINITY,
    }
}

/// `(α/2)·(log C(n,k) + log k!) = (α/2)·log(n!/(n−k)!)`.
pub fn log_binom_kfact_alpha(n: usize, k: usize, alpha: f64) -> f64 {
    assert!(k <= n, "k = {k} exceeds n = {n}");
    if k == 0 {
        return 0.0;
    }
    0.5 * alpha * (ln_gamma(n as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0))
}

/// `ln k!` for `k = 0..=n`.
pub fn log_factorials(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| if k < 2 { 0.0 } else { ln_gamma(k as f64 + 1.0) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_is_absorbing() {
        let a = LogMagnitude::from_abs(3.0);
        assert!((a * LogMagnitude::ZERO).is_zero());
        assert!((LogMagnitude::ZERO * a).is_zero());
        assert!((a * a).log_value().unwrap() - 9f64.ln() < 1e-15);
        assert_eq!(a.checked_div(LogMagnitude::ZERO), None);
        assert_eq!(LogMagnitude::ZERO.ln(), f64::NEG_INFINITY);
    }

    #[test]
    fn vandermonde_examples() {
        let v = log_vandermonde(&[c(0., 0.), c(1., 0.), c(2., 0.)]);
        assert!((v.ln() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(log_vandermonde(&[c(0., 0.), c(1., 0.)]).ln(), 0.0);
        let a = c(0.3, -0.2);
        assert!(log_vandermonde(&[a, a, c(1., 1.)]).is_zero());
        assert_eq!(log_vandermonde(&[]), LogMagnitude::ONE);
    }

    #[test]
    fn cross_examples() {
        let v = log_cross_vandermonde(&[c(0., 0.)], &[c(2., 0.)]);
        assert!((v.ln() - 2f64.ln()).abs() < 1e-15);
        let v = log_cross_vandermonde(&[c(0., 0.), c(1., 0.)], &[c(3., 0.)]);
        assert!((v.ln() - 6f64.ln()).abs() < 1e-15);
        assert!(log_cross_vandermonde(&[c(1., 2.)], &[c(5., 0.), c(1., 2.)]).is_zero());
    }

    #[test]
    fn energy_examples() {
        assert_eq!(log_energy(&[c(0., 0.), c(1., 0.)]), 0.0);
        assert!((log_energy(&[c(0., 0.), c(2., 0.)]) + 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!((log_energy(&[c(0., 0.), c(1., 0.), c(2., 0.)]) + 2.0 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(log_energy(&[c(1., 0.), c(1., 0.)]), f64::INFINITY);
    }

    #[test]
    fn binom_kfact_examples() {
        assert_eq!(log_binom_kfact_alpha(5, 0, 0.7), 0.0);
        assert!((log_binom_kfact_alpha(4, 2, 2.0) - 12f64.ln()).abs() < 1e-13);
        let lf = log_factorials(9);
        assert!((log_binom_kfact_alpha(9, 9, 0.5) - 0.25 * lf[9]).abs() < 1e-12);
        assert!((lf[5] - 120f64.ln()).abs() < 1e-13);
    }
}
