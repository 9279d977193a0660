use num_complex::Complex64;

use super::sum::ComplexSum;

/// Points sorted by modulus, then real part, then imaginary part.
///
/// Every symmetric reduction in this crate runs over this order, which makes
/// the results bitwise invariant under permutations of the input and keeps
/// the product expansion in [`elem_sym_all`] accurate (small factors first).
pub fn canonical_order(points: &[Complex64]) -> Vec<Complex64> {
    let mut v = points.to_vec();
    v.sort_by(|a, b| {
        a.norm()
            .total_cmp(&b.norm())
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
    v
}

/// Elementary symmetric functions `(e_0, …, e_m)` of `points`, `e_0 = 1`.
pub fn elem_sym_all(points: &[Complex64]) -> Vec<Complex64> {
    expand(&canonical_order(points))
}

fn expand(sorted: &[Complex64]) -> Vec<Complex64> {
    let mut e = Vec::with_capacity(sorted.len() + 1);
    e.push(Complex64::new(1.0, 0.0));
    for &x in sorted {
        e.push(Complex64::new(0.0, 0.0));
        for k in (1..e.len()).rev() {
            let prev = e[k - 1];
            e[k] += x * prev;
        }
    }
    e
}

/// Power sums `(p_1, …, p_K)` with `p_j = Σ_i x_i^j`.
pub fn power_sums(points: &[Complex64], k: usize) -> Vec<Complex64> {
    assert!(k >= 1, "power_sums needs K >= 1");
    let pts = canonical_order(points);
    let mut acc = vec![ComplexSum::new(); k];
    for &x in &pts {
        let mut pw = x;
        for a in acc.iter_mut() {
            a.add(pw);
            pw *= x;
        }
    }
    acc.iter().map(ComplexSum::value).collect()
}

/// Emitted when the elementary symmetric functions produced by Newton's
/// identities span more than twelve decades, where relative accuracy of the
/// small entries is no longer meaningful.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditioningWarning {
    pub dynamic_range: f64,
}

const NEWTON_RANGE_LIMIT: f64 = 1e12;

/// `(e_1, …, e_K)` from `(p_1, …, p_K)` by Newton's identities
/// `k·e_k = Σ_{i=1}^k (−1)^{i−1} e_{k−i} p_i`.
pub fn newton_e_from_p(p: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for k in 1..=p.len() {
        let mut acc = ComplexSum::new();
        for i in 1..=k {
            let term = e[k - i] * p[i - 1];
            acc.add(if i % 2 == 1 { term } else { -term });
        }
        e.push(acc.value() / k as f64);
    }
    e.remove(0);
    e
}

/// [`newton_e_from_p`] together with a conditioning diagnostic.
pub fn newton_e_from_p_checked(p: &[Complex64]) -> (Vec<Complex64>, Option<ConditioningWarning>) {
    let e = newton_e_from_p(p);
    let mags = e.iter().map(|z| z.norm()).chain(std::iter::once(1.0));
    let (lo, hi) = mags
        .filter(|&m| m > 0.0)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), m| (lo.min(m), hi.max(m)));
    let range = hi / lo;
    let warn = (range > NEWTON_RANGE_LIMIT).then_some(ConditioningWarning { dynamic_range: range });
    (e, warn)
}

/// Elementary and power-sum data of one configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricData {
    pub e: Vec<Complex64>,
    pub p: Vec<Complex64>,
}

impl SymmetricData {
    pub fn from_points(points: &[Complex64], k: usize) -> Self {
        SymmetricData { e: elem_sym_all(points), p: power_sums(points, k) }
    }

    /// Largest residual of Newton's identities for `k ≤ min(m, K)`,
    /// relative to the size of the terms involved.
    pub fn newton_residual(&self) -> f64 {
        let m = self.e.len() - 1;
        let top = m.min(self.p.len());
        let mut worst: f64 = 0.0;
        for k in 1..=top {
            let mut acc = ComplexSum::new();
            let mut scale = k as f64 * self.e[k].norm();
            for i in 1..=k {
                let t = self.e[k - i] * self.p[i - 1];
                scale += t.norm();
                acc.add(if i % 2 == 1 { t } else { -t });
            }
            let r = (acc.value() - self.e[k] * k as f64).norm();
            if scale > 0.0 {
                worst = worst.max(r / scale);
            }
        }
        worst
    }
}

/// Elementary symmetric functions of a point set divided by a power of two,
/// `ê_k = e_k / 2^{s k}`, so that products of many large points stay finite.
///
/// Because the scale is a power of two the scaled expansion is bitwise the
/// unscaled one up to exponent shifts.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledSym {
    pub scaled: Vec<Complex64>,
    pub shift: i32,
}

impl ScaledSym {
    /// Chooses the shift so that every scaled point has modulus at most 1.
    pub fn from_points(points: &[Complex64]) -> Self {
        let rmax = points.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let shift = if rmax > 0.0 { rmax.log2().ceil() as i32 } else { 0 };
        Self::with_shift(points, shift)
    }

    pub fn with_shift(points: &[Complex64], shift: i32) -> Self {
        let f = (-shift as f64).exp2();
        let pts: Vec<Complex64> = canonical_order(points).iter().map(|z| z * f).collect();
        ScaledSym { scaled: expand(&pts), shift }
    }

    pub fn degree(&self) -> usize {
        self.scaled.len() - 1
    }

    /// `ln |e_k|`, −∞ for a vanishing coefficient or `k` beyond the degree.
    pub fn log_abs(&self, k: usize) -> f64 {
        match self.scaled.get(k) {
            Some(z) => z.norm().ln() + (k as f64) * (self.shift as f64) * std::f64::consts::LN_2,
            None => f64::NEG_INFINITY,
        }
    }

    /// `e_k` itself; may overflow for large configurations.
    pub fn value(&self, k: usize) -> Complex64 {
        match self.scaled.get(k) {
            Some(z) => z * ((k as f64) * self.shift as f64).exp2(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Symmetric functions of the union of two point sets with equal shifts.
    pub fn convolve(&self, other: &ScaledSym) -> ScaledSym {
        assert_eq!(self.shift, other.shift, "convolving ScaledSym with different shifts");
        let mut out = vec![ComplexSum::new(); self.scaled.len() + other.scaled.len() - 1];
        for (i, a) in self.scaled.iter().enumerate() {
            for (j, b) in other.scaled.iter().enumerate() {
                out[i + j].add(a * b);
            }
        }
        ScaledSym { scaled: out.iter().map(ComplexSum::value).collect(), shift: self.shift }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn brute_force(points: &[Complex64]) -> Vec<Complex64> {
        let m = points.len();
        let mut e = vec![c(0., 0.); m + 1];
        for mask in 0u32..(1 << m) {
            let mut prod = c(1., 0.);
            for (i, p) in points.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    prod *= p;
                }
            }
            e[mask.count_ones() as usize] += prod;
        }
        e
    }

    #[test]
    fn elem_sym_examples() {
        let e = elem_sym_all(&[c(1., 0.), c(2., 0.), c(3., 0.)]);
        assert_eq!(e, brute_force(&[c(1., 0.), c(2., 0.), c(3., 0.)]));
        assert_eq!(e, vec![c(1., 0.), c(6., 0.), c(11., 0.), c(6., 0.)]);
        assert_eq!(elem_sym_all(&[]), vec![c(1., 0.)]);
        let z = c(0.4, -1.3);
        let e = elem_sym_all(&[z, -z]);
        assert_eq!(e[1], c(0., 0.));
        assert!((e[2] + z * z).norm() < 1e-15);
    }

    #[test]
    fn power_sum_examples() {
        let p = power_sums(&[c(1., 0.), c(2., 0.), c(3., 0.)], 3);
        assert_eq!(p, vec![c(6., 0.), c(14., 0.), c(36., 0.)]);
        assert_eq!(power_sums(&[], 2), vec![c(0., 0.); 2]);
        let p = power_sums(&[c(0., 1.), c(0., -1.)], 2);
        assert_eq!(p, vec![c(0., 0.), c(-2., 0.)]);
    }

    #[test]
    fn newton_examples() {
        let e = newton_e_from_p(&[c(6., 0.), c(14., 0.), c(36., 0.)]);
        assert_eq!(e, vec![c(6., 0.), c(11., 0.), c(6., 0.)]);
        assert_eq!(newton_e_from_p(&[c(0., 0.); 4]), vec![c(0., 0.); 4]);
        let s = c(0.25, 7.0);
        assert_eq!(newton_e_from_p(&[s]), vec![s]);
    }

    #[test]
    fn newton_warning_on_wide_range() {
        let (_, w) = newton_e_from_p_checked(&[c(6., 0.), c(14., 0.), c(36., 0.)]);
        assert!(w.is_none());
        let pts: Vec<Complex64> = (0..6).map(|k| c(1e3 * (k as f64 + 1.0), 0.)).collect();
        let (_, w) = newton_e_from_p_checked(&power_sums(&pts, 6));
        assert!(w.unwrap().dynamic_range > 1e12);
    }

    #[test]
    fn symmetric_data_consistent() {
        let d = SymmetricData::from_points(&[c(0.5, 0.1), c(-0.3, 0.8), c(1.2, -0.7)], 5);
        assert_eq!(d.e[0], c(1., 0.));
        assert!(d.newton_residual() < 1e-14);
    }

    #[test]
    fn scaled_sym_matches_plain() {
        let pts = [c(3.0, 1.0), c(-7.5, 0.2), c(0.1, 0.1), c(12.0, -4.0)];
        let s = ScaledSym::from_points(&pts);
        let e = elem_sym_all(&pts);
        for k in 0..=4 {
            assert!((s.value(k) - e[k]).norm() <= 1e-14 * e[k].norm().max(1.0));
            assert!((s.log_abs(k) - e[k].norm().ln()).abs() < 1e-13);
        }
        let a = ScaledSym::with_shift(&pts[..2], 4);
        let b = ScaledSym::with_shift(&pts[2..], 4);
        let ab = a.convolve(&b);
        for k in 0..=4 {
            assert!((ab.value(k) - e[k]).norm() <= 1e-12 * e[k].norm().max(1.0));
        }
    }

    #[test]
    fn permutation_invariance_is_exact() {
        let pts = [c(0.3, 0.2), c(-1.1, 0.4), c(0.9, -0.9), c(0.05, 2.0)];
        let mut rev = pts;
        rev.reverse();
        assert_eq!(elem_sym_all(&pts), elem_sym_all(&rev));
        assert_eq!(power_sums(&pts, 4), power_sums(&rev, 4));
    }
}
