use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::EnsembleSample;
use crate::error::{Error, Result};
use crate::numerics::power_sums;

/// Points of one configuration separated by the circle `|z| = r0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InsideOutsideSplit {
    pub inside: Vec<Complex64>,
    pub outside: Vec<Complex64>,
    pub r0: f64,
    /// `min |ω| − r0` over outside points; `+∞` when there are none.
    pub theta_gap: f64,
}

impl InsideOutsideSplit {
    pub fn n(&self) -> usize {
        self.inside.len() + self.outside.len()
    }

    pub fn m(&self) -> usize {
        self.inside.len()
    }

    /// The same outside configuration with a different inside vector.
    pub fn with_inside(&self, inside: Vec<Complex64>) -> Self {
        InsideOutsideSplit { inside, ..self.clone() }
    }
}

/// Splits a sample's points by the centered disk of radius `r0`.
pub fn split_disk(sample: &EnsembleSample, r0: f64) -> Result<InsideOutsideSplit> {
    split_points(&sample.points, r0)
}

/// Splits an arbitrary configuration; points exactly on the circle are
/// rejected so that the gap is never silently zero.
pub fn split_points(points: &[Complex64], r0: f64) -> Result<InsideOutsideSplit> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive, got {r0}")));
    }
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    let mut theta_gap = f64::INFINITY;
    for (index, &z) in points.iter().enumerate() {
        let r = z.norm();
        if r < r0 {
            inside.push(z);
        } else if r > r0 {
            theta_gap = theta_gap.min(r - r0);
            outside.push(z);
        } else {
            return Err(Error::BoundaryPoint { index, r0 });
        }
    }
    Ok(InsideOutsideSplit { inside, outside, r0, theta_gap })
}

/// The prescribed inside power sums `s = (p_1, …, p_{r_α−1})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    pub s: Vec<Complex64>,
    pub r_alpha: usize,
}

pub fn moment_vector(split: &InsideOutsideSplit, alpha: f64) -> MomentVector {
    let r_alpha = crate::r_alpha(alpha);
    let s = if r_alpha > 1 { power_sums(&split.inside, r_alpha - 1) } else { Vec::new() };
    MomentVector { s, r_alpha }
}
