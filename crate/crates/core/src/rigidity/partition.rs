use std::f64::consts::E;

/// Start of the plateau of φ, in units of r0.
pub const X1: f64 = (1.0 + E) / 2.0;
/// End of the plateau of φ, in units of r0.
pub const X2: f64 = E;
/// End of the support of φ, in units of r0.
pub const X3: f64 = E * (1.0 + E) / 2.0;

/// `exp(−k/x) / (exp(−k/x) + exp(−k/(1−x)))`, clamped to 0 and 1 outside (0, 1).
pub fn smooth_step(x: f64, sharpness: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        // Written as a logistic in the exponent difference to avoid 0/0.
        let d = sharpness * (1.0 / x - 1.0 / (1.0 - x));
        1.0 / (1.0 + d.exp())
    }
}

/// Which bump occupies shell 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FirstShell {
    /// φ itself, which ramps up on (r0, x1·r0).
    Phi,
    /// φ̃: equal to 1 on (r0, x2·r0] and to φ beyond, so shell totals
    /// cover every point outside the disk.
    PhiTilde,
}

/// Radial bumps `φ_j(z) = φ(|z|/e^j)`, `j = 0..=J`.
///
/// The down-ramp of φ on `[e·r0, e·x1·r0]` is the pullback of its up-ramp
/// on `[r0, x1·r0]`, so neighbouring shells add to exactly `S + (1 − S)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionOfUnity {
    pub r0: f64,
    pub shells: usize,
    pub sharpness: f64,
    pub first: FirstShell,
}

pub fn build_partition(r0: f64, shells: usize, sharpness: f64) -> PartitionOfUnity {
    assert!(r0 > 0.0 && shells >= 1 && sharpness > 0.0, "invalid partition parameters");
    PartitionOfUnity { r0, shells, sharpness, first: FirstShell::Phi }
}

impl PartitionOfUnity {
    pub fn with_first_shell(self, first: FirstShell) -> Self {
        PartitionOfUnity { first, ..self }
    }

    /// The base bump φ at radius `r`.
    pub fn phi(&self, r: f64) -> f64 {
        let u = r / self.r0;
        if u <= 1.0 || u >= X3 {
            0.0
        } else if u < X1 {
            smooth_step((u - 1.0) / (X1 - 1.0), self.sharpness)
        } else if u <= X2 {
            1.0
        } else {
            1.0 - smooth_step((u / E - 1.0) / (X1 - 1.0), self.sharpness)
        }
    }

    /// φ̃ at radius `r`.
    pub fn phi_tilde(&self, r: f64) -> f64 {
        let u = r / self.r0;
        if u > 1.0 && u <= X2 {
            1.0
        } else {
            self.phi(r)
        }
    }

    /// Weight of shell `j` at radius `r`; zero for `j > J`.
    pub fn weight(&self, j: usize, r: f64) -> f64 {
        if j > self.shells {
            return 0.0;
        }
        let rj = r / (j as f64).exp();
        if j == 0 && self.first == FirstShell::PhiTilde {
            self.phi_tilde(rj)
        } else {
            self.phi(rj)
        }
    }

    /// `Σ_{j=0}^{J} φ_j(r)`.
    pub fn total(&self, r: f64) -> f64 {
        (0..=self.shells).map(|j| self.weight(j, r)).sum()
    }

    /// The radial range `[x1·r0, e^{J−1}·x2·r0]` on which the total is 1.
    pub fn asserted_range(&self) -> (f64, f64) {
        (X1 * self.r0, ((self.shells as f64) - 1.0).exp() * X2 * self.r0)
    }

    /// Shells whose support meets radius `r`.
    pub fn shells_at(&self, r: f64) -> impl Iterator<Item = usize> + '_ {
        let u = (r / self.r0).ln();
        let hi = u.floor().max(0.0) as usize;
        let lo = hi.saturating_sub(1);
        (lo..=hi.min(self.shells)).filter(move |&j| j <= self.shells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_step_shape() {
        assert_eq!(smooth_step(0.0, 1.0), 0.0);
        assert_eq!(smooth_step(1.0, 1.0), 1.0);
        assert!((smooth_step(0.5, 1.0) - 0.5).abs() < 1e-15);
        for i in 1..100 {
            let x = i as f64 / 100.0;
            assert!((smooth_step(x, 2.0) + smooth_step(1.0 - x, 2.0) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn plateau_and_support() {
        let p = build_partition(1.3, 4, 1.0);
        assert_eq!(p.weight(0, 2.0 * 1.3), 1.0);
        for j in 0..=4 {
            let start = (j as f64).exp() * 1.3;
            assert_eq!(p.weight(j, start * 0.999), 0.0);
            assert_eq!(p.weight(j, start * X3 * 1.001), 0.0);
        }
    }

    #[test]
    fn matching_condition() {
        let p = build_partition(1.0, 3, 1.0);
        for i in 0..=100 {
            let y = E / 2.0 * i as f64 / 100.0;
            let lhs = p.phi(1.0 + y);
            let rhs = 1.0 - p.phi(E + y * E);
            assert!((lhs - rhs).abs() < 1e-12, "y={y}");
        }
    }

    #[test]
    fn total_is_one_at_e_x1() {
        let p = build_partition(0.7, 3, 1.0);
        assert!((p.total(E * X1 * 0.7) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tilde_patches_first_ring() {
        let p = build_partition(1.0, 2, 1.0);
        assert!(p.total(1.1) < 1.0);
        let t = p.with_first_shell(FirstShell::PhiTilde);
        assert_eq!(t.total(1.1), 1.0);
        assert!((t.total(4.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shells_at_covers_support() {
        let p = build_partition(1.0, 5, 1.0);
        for i in 1..2000 {
            let r = 1.0 + i as f64 * 0.1;
            let listed: Vec<usize> = p.shells_at(r).collect();
            for j in 0..=5 {
                if p.weight(j, r) > 0.0 {
                    assert!(listed.contains(&j), "r={r} j={j}");
                }
            }
        }
    }
}
