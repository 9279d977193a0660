use num_complex::Complex64;

use super::partition::PartitionOfUnity;
use crate::ensembles::EnsembleKind;
use crate::error::{Error, Result};
use crate::numerics::{canonical_order, newton_e_from_p, power_sums, CompensatedSum, ComplexSum};

/// Shell-localized inverse power sums of a zero set.
///
/// `signed[l-1][j] = Σ_ω φ_j(ω)/ω^l` and `absolute[l-1][j] = Σ_ω φ_j(ω)/|ω|^l`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShellSums {
    pub signed: Vec<Vec<Complex64>>,
    pub absolute: Vec<Vec<f64>>,
}

impl ShellSums {
    pub fn l_max(&self) -> usize {
        self.signed.len()
    }

    /// `Σ_{j=0}^{k} I_l[j, j+1]`, the sum over shells `0..=k`.
    pub fn signed_total(&self, l: usize, k: usize) -> Complex64 {
        let row = &self.signed[l - 1];
        row[..=k.min(row.len() - 1)].iter().copied().collect::<ComplexSum>().value()
    }

    pub fn absolute_total(&self, l: usize, k: usize) -> f64 {
        let row = &self.absolute[l - 1];
        row[..=k.min(row.len() - 1)].iter().copied().collect::<CompensatedSum>().value()
    }
}

/// Computes both the signed and absolute shell sums for `l = 1..=l_max`.
pub fn inverse_power_sums(zeros: &[Complex64], pou: &PartitionOfUnity, l_max: usize) -> Result<ShellSums> {
    if l_max == 0 {
        return Err(Error::invalid("l_max must be >= 1"));
    }
    if zeros.iter().any(|z| z.norm() == 0.0) {
        return Err(Error::invalid("zero at the origin has no inverse powers"));
    }
    let shells = pou.shells + 1;
    let mut signed = vec![vec![ComplexSum::new(); shells]; l_max];
    let mut absolute = vec![vec![CompensatedSum::new(); shells]; l_max];
    for w in canonical_order(zeros) {
        let r = w.norm();
        let inv = w.inv();
        for j in pou.shells_at(r) {
            let phi = pou.weight(j, r);
            if phi == 0.0 {
                continue;
            }
            let mut pw = inv;
            for l in 0..l_max {
                signed[l][j].add(pw * phi);
                absolute[l][j].add(pw.norm() * phi);
                pw *= inv;
            }
        }
    }
    Ok(ShellSums {
        signed: signed.iter().map(|row| row.iter().map(ComplexSum::value).collect()).collect(),
        absolute: absolute.iter().map(|row| row.iter().map(CompensatedSum::value).collect()).collect(),
    })
}

/// Summary statistics of one outside configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidityStats {
    pub sums: ShellSums,
    pub x: f64,
}

impl RigidityStats {
    pub fn new(outside: &[Complex64], pou: &PartitionOfUnity, kind: EnsembleKind, alpha: f64) -> Result<Self> {
        let l_max = match kind {
            EnsembleKind::AlphaGaf => crate::s_alpha(alpha),
            EnsembleKind::Ginibre => 3,
        };
        Ok(RigidityStats { sums: inverse_power_sums(outside, pou, l_max)?, x: x_statistic(outside, kind, alpha) })
    }
}

/// `Σ_{k=1}^{s−1} |Σ_j ω_j^{−k}| + Σ_j |ω_j|^{−s}` with `s = s_α`, or `s = 3`
/// for the Ginibre ensemble.
pub fn x_statistic(outside: &[Complex64], kind: EnsembleKind, alpha: f64) -> f64 {
    if outside.is_empty() {
        return 0.0;
    }
    let s = match kind {
        EnsembleKind::AlphaGaf => crate::s_alpha(alpha),
        EnsembleKind::Ginibre => 3,
    };
    let inv: Vec<Complex64> = outside.iter().map(|w| w.inv()).collect();
    let mut x = CompensatedSum::new();
    if s > 1 {
        for p in power_sums(&inv, s - 1) {
            x.add(p.norm());
        }
    }
    for w in canonical_order(outside) {
        x.add(w.norm().powi(-(s as i32)));
    }
    x.value()
}

/// `Z_l = P_l(I[1], …, I[l])` for `l = 1..=C`, the elementary symmetric
/// functions matching the given power sums.
pub fn z_vector_from_sums(sums: &[Complex64]) -> Vec<Complex64> {
    newton_e_from_p(sums)
}

/// Z-vector from inverse power sums restricted to shells `0..=k_cut`.
pub fn z_vector_truncated(outside: &[Complex64], pou: &PartitionOfUnity, c_cut: usize, k_cut: usize) -> Result<Vec<Complex64>> {
    let s = inverse_power_sums(outside, pou, c_cut)?;
    let sums: Vec<Complex64> = (1..=c_cut).map(|l| s.signed_total(l, k_cut)).collect();
    Ok(z_vector_from_sums(&sums))
}

/// Z-vector from the full inverse power sums `Σ_ω ω^{−l}`.
pub fn z_vector_untruncated(outside: &[Complex64], c_cut: usize) -> Vec<Complex64> {
    let inv: Vec<Complex64> = outside.iter().map(|w| w.inv()).collect();
    z_vector_from_sums(&power_sums(&inv, c_cut))
}
