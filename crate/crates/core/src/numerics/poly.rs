use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Default relative residual tolerance for [`poly_roots`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

const MAX_ITER: usize = 2000;

/// A complex polynomial with coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Fails if `coeffs` is empty, non-finite, or has a zero leading coefficient.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        match coeffs.last() {
            None => return Err(Error::invalid("polynomial with no coefficients")),
            Some(c) if *c == Complex64::new(0.0, 0.0) => {
                return Err(Error::invalid("leading coefficient is zero"))
            }
            _ => {}
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("non-finite polynomial coefficient"));
        }
        Ok(ComplexPoly { coeffs })
    }

    /// The monic polynomial `Π (z − r_i)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let e = super::elem_sym_all(roots);
        let n = roots.len();
        let coeffs = (0..=n)
            .map(|k| if (n - k) % 2 == 0 { e[n - k] } else { -e[n - k] })
            .collect();
        ComplexPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `|p(z)| / max_k |a_k|·max(1,|z|)^k`, evaluated without overflow.
    pub fn scaled_residual(&self, z: Complex64) -> f64 {
        let n = self.degree();
        if z.norm() <= 1.0 {
            let scale = self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max);
            self.eval(z).norm() / scale
        } else {
            // Divide through by z^n and evaluate in y = 1/z.
            let y = z.inv();
            let ay = y.norm();
            let q = self.coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * y + a);
            let mut scale: f64 = 0.0;
            let mut pw = 1.0;
            for k in (0..=n).rev() {
                scale = scale.max(self.coeffs[k].norm() * pw);
                pw *= ay;
            }
            q.norm() / scale
        }
    }
}

/// All roots of `p`, with multiplicity, by Aberth–Ehrlich iteration.
///
/// Every returned root `r` satisfies
/// `|p(r)| ≤ tol · max_k |a_k|·max(1,|r|)^k`.
pub fn poly_roots(p: &ComplexPoly, tol: f64) -> Result<Vec<Complex64>> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::invalid("poly_roots needs degree >= 1"));
    }
    let a = p.coeffs();
    let zeros = a.iter().take_while(|c| **c == Complex64::new(0.0, 0.0)).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let rest = &a[zeros..];
    match rest.len() - 1 {
        0 => {}
        1 => roots.push(-rest[0] / rest[1]),
        _ => roots.extend(aberth(rest)?),
    }

    let worst = roots.iter().map(|&r| p.scaled_residual(r)).fold(0.0, f64::max);
    if !(worst <= tol) {
        return Err(Error::RootNonConvergence { iterations: MAX_ITER, best_residual: worst });
    }
    Ok(roots)
}

// Roots of a polynomial with nonzero constant and leading terms.
fn aberth(a: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.len() - 1;
    // Rescale z = 2^s w so the roots have geometric-mean modulus near 1,
    // then normalize the coefficients. Powers of two keep this exact.
    let mut s = ((a[0].norm().log2() - a[n].norm().log2()) / n as f64).round() as i32;
    let rescale = |s: i32| -> Vec<Complex64> {
        a.iter().enumerate().map(|(k, c)| c * exp2i(s * k as i32)).collect()
    };
    let mut b = rescale(s);
    let lossy = b.iter().zip(a).any(|(x, y)| !x.is_finite() || (x.norm() == 0.0) != (y.norm() == 0.0));
    if lossy {
        s = 0;
        b = a.to_vec();
    }
    let big = b.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let norm = exp2i(-(big.log2().floor() as i32));
    for c in b.iter_mut() {
        *c *= norm;
    }

    let mut z = initial_guesses(&b);
    let mut done = vec![false; n];
    let eps = f64::EPSILON * (4 * n + 1) as f64;
    let mut iterations = 0;
    while iterations < MAX_ITER && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, pv, bound) = newton_ratio(&b, z[i]);
            if pv <= eps * bound {
                done[i] = true;
                continue;
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        sum += d.inv();
                    }
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
            } else {
                z[i] -= ratio;
            }
        }
    }
    if done.iter().any(|d| !d) {
        let best = z
            .iter()
            .map(|&w| {
                let (_, pv, bound) = newton_ratio(&b, w);
                pv / bound
            })
            .fold(0.0, f64::max);
        return Err(Error::RootNonConvergence { iterations, best_residual: best });
    }
    let scale = exp2i(s);
    Ok(z.into_iter().map(|w| w * scale).collect())
}

fn exp2i(k: i32) -> f64 {
    (k as f64).exp2()
}

// Returns (p/p', |p|, Σ|b_k||w|^k), all scaled by |w|^{-n} when |w| > 1.
fn newton_ratio(b: &[Complex64], w: Complex64) -> (Complex64, f64, f64) {
    let n = b.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    if w.norm() <= 1.0 {
        let aw = w.norm();
        let (mut p, mut dp, mut bound) = (b[n], zero, b[n].norm());
        for k in (0..n).rev() {
            dp = dp * w + p;
            p = p * w + b[k];
            bound = bound * aw + b[k].norm();
        }
        let ratio = if dp == zero { p } else { p / dp };
        (ratio, p.norm(), bound)
    } else {
        // q(y) = y^n p(1/y) has coefficients b reversed; p'/p = y(n − y q'/q).
        let y = w.inv();
        let ay = y.norm();
        let (mut q, mut dq, mut bound) = (b[0], zero, b[0].norm());
        for k in 1..=n {
            dq = dq * y + q;
            q = q * y + b[k];
            bound = bound * ay + b[k].norm();
        }
        if q == zero {
            return (zero, 0.0, bound);
        }
        let dlog = y * (Complex64::new(n as f64, 0.0) - y * dq / q);
        let ratio = if dlog == zero { w } else { dlog.inv() };
        (ratio, q.norm(), bound)
    }
}

// Starting points on circles whose radii come from the upper convex hull of
// (k, ln|b_k|), so each group of roots starts near its own modulus.
fn initial_guesses(b: &[Complex64]) -> Vec<Complex64> {
    let n = b.len() - 1;
    let pts: Vec<(usize, f64)> = b
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (k1, y1) = hull[hull.len() - 2];
            let (k2, y2) = hull[hull.len() - 1];
            let cross = (k2 as f64 - k1 as f64) * (p.1 - y1) - (y2 - y1) * (p.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut z = Vec::with_capacity(n);
    for (seg, w) in hull.windows(2).enumerate() {
        let (k1, y1) = w[0];
        let (k2, y2) = w[1];
        let cnt = k2 - k1;
        let radius = ((y1 - y2) / cnt as f64).exp();
        let offset = 0.4 + 0.7 * seg as f64;
        for q in 0..cnt {
            let angle = TAU * q as f64 / cnt as f64 + offset;
            z.push(Complex64::from_polar(radius, angle));
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_gaussian, stream};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn quadratic() {
        let p = ComplexPoly::new(vec![c(-1., 0.), c(0., 0.), c(1., 0.)]).unwrap();
        let r = sorted(poly_roots(&p, DEFAULT_ROOT_TOL).unwrap());
        assert!((r[0] - c(-1., 0.)).norm() < 1e-14);
        assert!((r[1] - c(1., 0.)).norm() < 1e-14);
    }

    #[test]
    fn monomial_has_zero_roots() {
        let p = ComplexPoly::new(vec![c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]).unwrap();
        assert_eq!(poly_roots(&p, DEFAULT_ROOT_TOL).unwrap(), vec![c(0., 0.); 3]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ComplexPoly::new(vec![]).is_err());
        assert!(ComplexPoly::new(vec![c(1., 0.), c(0., 0.)]).is_err());
        let p = ComplexPoly::new(vec![c(3., 0.)]).unwrap();
        assert!(poly_roots(&p, DEFAULT_ROOT_TOL).is_err());
    }

    #[test]
    fn double_root() {
        let p = ComplexPoly::from_roots(&[c(1., 0.), c(1., 0.), c(-2., 0.5)]);
        let r = poly_roots(&p, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.iter().filter(|z| (*z - c(1., 0.)).norm() < 1e-6).count(), 2);
    }

    #[test]
    fn alpha_gaf_degree_twenty() {
        // Residual oracle: evaluate the scaled residual independently by
        // direct Horner summation on the original coefficients.
        let mut rng = stream(2024, 1);
        for &alpha in &[0.5, 1.0, 2.0] {
            let mut lf = 0.0;
            let coeffs: Vec<Complex64> = (0..=20)
                .map(|k| {
                    if k > 0 {
                        lf += (k as f64).ln();
                    }
                    complex_gaussian(&mut rng) * (-0.5 * alpha * lf).exp()
                })
                .collect();
            let p = ComplexPoly::new(coeffs.clone()).unwrap();
            let roots = poly_roots(&p, DEFAULT_ROOT_TOL).unwrap();
            assert_eq!(roots.len(), 20);
            for r in roots {
                let mut val = c(0., 0.);
                let mut scale: f64 = 0.0;
                for (k, a) in coeffs.iter().enumerate() {
                    val += a * r.powu(k as u32);
                    scale = scale.max(a.norm() * r.norm().max(1.0).powi(k as i32));
                }
                assert!(val.norm() / scale < 1e-8);
            }
        }
    }

    #[test]
    fn reconstructs_monic_polynomial() {
        let mut rng = stream(99, 7);
        for &deg in &[5usize, 17, 40, 64] {
            let truth: Vec<Complex64> = (0..deg).map(|_| crate::rng::uniform_in_disk(&mut rng, 1.0)).collect();
            let p = ComplexPoly::from_roots(&truth);
            let roots = poly_roots(&p, DEFAULT_ROOT_TOL).unwrap();
            let q = ComplexPoly::from_roots(&roots);
            let scale = p.coeffs().iter().map(|a| a.norm()).fold(0.0, f64::max);
            for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
                assert!((a - b).norm() / scale < 1e-7, "degree {deg}");
            }
        }
    }

    #[test]
    fn wide_dynamic_range() {
        // Roots spread over many decades; every one must be found to high
        // relative accuracy, which a companion-matrix solver would not give.
        let truth: Vec<Complex64> = (0..12).map(|k| Complex64::from_polar(4f64.powi(k - 6), k as f64)).collect();
        let p = ComplexPoly::from_roots(&truth);
        let roots = poly_roots(&p, DEFAULT_ROOT_TOL).unwrap();
        for t in &truth {
            let best = roots.iter().map(|r| (r - t).norm() / t.norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-9, "{t}: {best}");
        }
    }
}
