use num_complex::Complex64;

use crate::conditional::ScaledComplex;
use crate::error::{Error, Result};
use crate::numerics::log_factorials;

/// The functionals `Q_ij` and `Q_0` of a vector `(x_1, …, x_C)`.
///
/// `q[i][j − r_α]` holds `Q_ij` for `0 ≤ i ≤ m`, `r_α ≤ j ≤ m`.
#[derive(Clone, Debug, PartialEq)]
pub struct QFunctionals {
    pub q: Vec<Vec<f64>>,
    pub q0: f64,
    pub r_alpha: usize,
}

impl QFunctionals {
    pub fn q_ij(&self, i: usize, j: usize) -> f64 {
        self.q[i][j - self.r_alpha]
    }

    /// Largest `Q_ij`; zero when the index range is empty.
    pub fn q_max(&self) -> f64 {
        self.q.iter().flatten().copied().fold(0.0, f64::max)
    }
}

/// `Q_ij = |Σ_{l=m−(i∧j)}^{C} conj(x_{l+i−m})·x_{l+j−m}·(l!)^α|` and
/// `Q_0 = (1/h)·Σ_{l=L}^{L+h} |x_{l−m}|²·(l!)^α`.
///
/// Indexing follows the symmetric-function convention: `x_0 = 1` (the empty
/// product), negative indices and indices beyond `C` are zero. Terms are
/// accumulated with their factorial weights in the log domain.
pub fn q_functionals(x: &[Complex64], alpha: f64, m: usize, l_start: usize, h: usize) -> Result<QFunctionals> {
    let c = x.len();
    if h == 0 || l_start + h + m > c {
        return Err(Error::invalid(format!("need h >= 1 and L + h + m <= C (L={l_start}, h={h}, m={m}, C={c})")));
    }
    let ra = crate::r_alpha(alpha);
    let lf = log_factorials(c);
    let at = |q: isize| -> Complex64 {
        match q {
            0 => Complex64::new(1.0, 0.0),
            q if q > 0 && (q as usize) <= c => x[q as usize - 1],
            _ => Complex64::new(0.0, 0.0),
        }
    };
    let mut q = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let mut row = Vec::new();
        for j in ra..=m {
            let lo = m - i.min(j);
            let terms: Vec<(Complex64, f64)> = (lo..=c)
                .map(|l| {
                    let a = at(l as isize + i as isize - m as isize);
                    let b = at(l as isize + j as isize - m as isize);
                    (a.conj() * b, alpha * lf[l])
                })
                .collect();
            let s = ScaledComplex::sum(&terms);
            row.push(s.ln_abs().exp());
        }
        q.push(row);
    }
    let terms: Vec<(Complex64, f64)> = (l_start..=l_start + h)
        .map(|l| (Complex64::new(at(l as isize - m as isize).norm_sqr(), 0.0), alpha * lf[l]))
        .collect();
    let q0 = (ScaledComplex::sum(&terms).ln_abs() - (h as f64).ln()).exp();
    Ok(QFunctionals { q, q0, r_alpha: ra })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::elem_sym_all;
    use crate::rigidity::z_vector_untruncated;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fact(k: usize) -> f64 {
        (1..=k).map(|i| i as f64).product()
    }

    #[test]
    fn zero_vector_keeps_only_the_unit_entry() {
        let m = 3;
        let qf = q_functionals(&[c(0., 0.); 9], 1.0, m, 4, 2).unwrap();
        assert_eq!(qf.q0, 0.0);
        for i in 0..=m {
            for j in 2..=m {
                let want = if i == j { fact(m - i) } else { 0.0 };
                assert!((qf.q_ij(i, j) - want).abs() < 1e-12 * want.max(1.0));
            }
        }
    }

    #[test]
    fn single_entry_q0() {
        let (m, l, h) = (2usize, 5usize, 3usize);
        let mut x = vec![c(0., 0.); 12];
        let cc = c(0.3, -0.4);
        x[l - m - 1] = cc;
        let qf = q_functionals(&x, 0.5, m, l, h).unwrap();
        let want = cc.norm_sqr() * fact(l).powf(0.5) / h as f64;
        assert!((qf.q0 - want).abs() < 1e-13 * want);
    }

    #[test]
    fn brute_force_indexing() {
        let x: Vec<Complex64> = (1..=8).map(|k| c(0.1 * k as f64, 0.05 * (k as f64).sin())).collect();
        let (m, alpha) = (3usize, 0.5);
        let qf = q_functionals(&x, alpha, m, 3, 2).unwrap();
        let get = |q: isize| if q == 0 { c(1., 0.) } else if q >= 1 && q <= 8 { x[q as usize - 1] } else { c(0., 0.) };
        for i in 0..=m {
            for j in 3..=m {
                let mut s = c(0., 0.);
                for l in 0..=8isize {
                    s += get(l + i as isize - m as isize).conj() * get(l + j as isize - m as isize) * fact(l as usize).powf(alpha);
                }
                assert!((qf.q_ij(i, j) - s.norm()).abs() < 1e-12 * s.norm());
            }
        }
    }

    #[test]
    fn rejects_short_vectors() {
        assert!(q_functionals(&[c(1., 0.); 4], 1.0, 2, 2, 1).is_err());
        assert!(q_functionals(&[c(1., 0.); 10], 1.0, 2, 2, 0).is_err());
    }

    #[test]
    fn tail_average_identity() {
        let om = [c(1.5, 0.3), c(-2.0, 1.0), c(0.2, -3.1), c(2.5, 2.5), c(-1.1, -1.7), c(0.9, 2.2)];
        let (m, alpha, l0, h) = (2usize, 1.0, 3usize, 2usize);
        let nm = om.len();
        let n = nm + m;
        let z = z_vector_untruncated(&om, nm + m);
        let qf = q_functionals(&z, alpha, m, l0, h).unwrap();
        let e = elem_sym_all(&om);
        let direct: f64 = (l0..=l0 + h).map(|l| (e[n - l] / e[nm]).norm_sqr() * fact(l).powf(alpha)).sum::<f64>() / h as f64;
        assert!((qf.q0 - direct).abs() < 1e-8 * direct);
    }
}
