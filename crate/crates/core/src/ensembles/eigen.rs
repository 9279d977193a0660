//! Eigenvalues of dense complex matrices: balancing, Householder reduction
//! to Hessenberg form, then single-shift QR with Wilkinson shifts.

use num_complex::Complex64;

use crate::error::{Error, Result};

const SWEEPS_PER_EIGENVALUE: usize = 30;
const EXCEPTIONAL_EVERY: usize = 10;

/// Eigenvalues of the `n × n` row-major matrix `a` (consumed as workspace).
pub fn complex_eigenvalues(mut a: Vec<Complex64>, n: usize) -> Result<Vec<Complex64>> {
    if a.len() != n * n {
        return Err(Error::invalid(format!("matrix has {} entries, expected {}", a.len(), n * n)));
    }
    if a.iter().any(|z| !z.is_finite()) {
        return Err(Error::invalid("non-finite matrix entry"));
    }
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![a[0]]),
        _ => {}
    }
    balance(&mut a, n);
    hessenberg(&mut a, n);
    hessenberg_qr(a, n)
}

fn l1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

// Diagonal similarity by powers of two equalizing row and column norms.
fn balance(a: &mut [Complex64], n: usize) {
    const RADIX: f64 = 2.0;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += l1(a[j * n + i]);
                    r += l1(a[i * n + j]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut c2, r2) = (c, r);
            while c2 < r2 / RADIX {
                f *= RADIX;
                c2 *= RADIX * RADIX;
            }
            while c2 >= r2 * RADIX {
                f /= RADIX;
                c2 /= RADIX * RADIX;
            }
            let (cf, rf) = (c * f, r / f);
            if (cf + rf) < 0.95 * s {
                converged = false;
                for j in 0..n {
                    a[i * n + j] /= f;
                    a[j * n + i] *= f;
                }
            }
        }
    }
}

// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut [Complex64], n: usize) {
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        for i in 0..n {
            v[i] = zero;
        }
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] -= alpha;
        let vn = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for i in k + 1..n {
            v[i] /= vn;
        }
        // A ← (I − 2vv*) A
        for j in k..n {
            let mut s = zero;
            for i in k + 1..n {
                s += v[i].conj() * a[i * n + j];
            }
            let s2 = s * 2.0;
            for i in k + 1..n {
                a[i * n + j] -= v[i] * s2;
            }
        }
        // A ← A (I − 2vv*)
        for i in 0..n {
            let mut s = zero;
            for j in k + 1..n {
                s += a[i * n + j] * v[j];
            }
            let s2 = s * 2.0;
            for j in k + 1..n {
                a[i * n + j] -= s2 * v[j].conj();
            }
        }
        a[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            a[i * n + k] = zero;
        }
    }
}

// Rotation [c s; −s̄ c] with c real mapping (x, y) to (r, 0).
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    if y.norm() == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if x.norm() == 0.0 {
        return (0.0, y.conj() / y.norm());
    }
    let ax = x.norm();
    let r = ax.hypot(y.norm());
    (ax / r, (x / ax) * y.conj() / r)
}

fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (m1, m2) = (mean + disc, mean - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

fn hessenberg_qr(mut h: Vec<Complex64>, n: usize) -> Result<Vec<Complex64>> {
    let eps = f64::EPSILON;
    let zero = Complex64::new(0.0, 0.0);
    let mut eig = vec![zero; n];
    let mut hi = n - 1;
    let mut since_deflation = 0;
    let mut total = 0;
    let cap = SWEEPS_PER_EIGENVALUE * n;
    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    let idx = |i: usize, j: usize| i * n + j;
    loop {
        if hi == 0 {
            eig[0] = h[0];
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let sub = h[idx(lo, lo - 1)].norm();
            let diag = h[idx(lo, lo)].norm() + h[idx(lo - 1, lo - 1)].norm();
            if sub <= eps * diag || sub < f64::MIN_POSITIVE {
                h[idx(lo, lo - 1)] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[idx(hi, hi)];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > cap {
            return Err(Error::EigenNonConvergence { iterations: total, deflated: eig[hi + 1..].to_vec() });
        }
        let mu = if since_deflation % EXCEPTIONAL_EVERY == 0 {
            h[idx(hi, hi)] + Complex64::new(0.75 * h[idx(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson(h[idx(hi - 1, hi - 1)], h[idx(hi - 1, hi)], h[idx(hi, hi - 1)], h[idx(hi, hi)])
        };
        for i in lo..=hi {
            h[idx(i, i)] -= mu;
        }
        rots.clear();
        for k in lo..hi {
            let (c, s) = givens(h[idx(k, k)], h[idx(k + 1, k)]);
            for j in k..=hi {
                let (x, y) = (h[idx(k, j)], h[idx(k + 1, j)]);
                h[idx(k, j)] = x * c + s * y;
                h[idx(k + 1, j)] = -s.conj() * x + y * c;
            }
            rots.push((c, s));
        }
        for (r, k) in (lo..hi).enumerate() {
            let (c, s) = rots[r];
            for i in lo..=(k + 2).min(hi) {
                let (x, y) = (h[idx(i, k)], h[idx(i, k + 1)]);
                h[idx(i, k)] = x * c + y * s.conj();
                h[idx(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            h[idx(i, i)] += mu;
        }
    }
    Ok(eig)
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
    fn triangular_matrix() {
        let a = vec![c(1., 0.), c(5., 2.), c(0., 3.), c(0., 0.), c(-2., 1.), c(4., 0.), c(0., 0.), c(0., 0.), c(0.5, -0.5)];
        let e = sorted(complex_eigenvalues(a, 3).unwrap());
        let want = sorted(vec![c(1., 0.), c(-2., 1.), c(0.5, -0.5)]);
        for (x, y) in e.iter().zip(&want) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn rotation_block() {
        // [[0, −1], [1, 0]] has eigenvalues ±i.
        let e = sorted(complex_eigenvalues(vec![c(0., 0.), c(-1., 0.), c(1., 0.), c(0., 0.)], 2).unwrap());
        assert!((e[0] - c(0., -1.)).norm() < 1e-14);
        assert!((e[1] - c(0., 1.)).norm() < 1e-14);
    }

    #[test]
    fn companion_matrix_roots() {
        // Companion matrix of (z−1)(z−2)(z−3)(z+i).
        let roots = [c(1., 0.), c(2., 0.), c(3., 0.), c(0., -1.)];
        let p = crate::numerics::ComplexPoly::from_roots(&roots);
        let n = 4;
        let mut a = vec![c(0., 0.); n * n];
        for i in 1..n {
            a[i * n + i - 1] = c(1., 0.);
        }
        for i in 0..n {
            a[i * n + n - 1] = -p.coeffs()[i];
        }
        let e = complex_eigenvalues(a, n).unwrap();
        for r in &roots {
            assert!(e.iter().any(|z| (z - r).norm() < 1e-10));
        }
    }

    #[test]
    fn trace_and_determinant_preserved() {
        let mut rng = stream(5, 5);
        for &n in &[2usize, 7, 30, 100] {
            let a: Vec<Complex64> = (0..n * n).map(|_| complex_gaussian(&mut rng)).collect();
            let trace: Complex64 = (0..n).map(|i| a[i * n + i]).sum();
            let e = complex_eigenvalues(a, n).unwrap();
            let sum: Complex64 = e.iter().sum();
            assert!((sum - trace).norm() <= 1e-9 * trace.norm().max(1.0), "n={n}");
        }
    }

    #[test]
    fn shape_errors() {
        assert!(complex_eigenvalues(vec![c(1., 0.); 3], 2).is_err());
        assert!(complex_eigenvalues(vec![c(f64::NAN, 0.)], 1).is_err());
    }
}
