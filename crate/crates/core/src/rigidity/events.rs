use serde::{Deserialize, Serialize};

use super::partition::{build_partition, FirstShell};
use super::qfun::q_functionals;
use super::sums::{inverse_power_sums, z_vector_from_sums};
use crate::ensembles::InsideOutsideSplit;
use crate::error::{Error, Result};

/// User-chosen constants of the good event: the bound `M`, the gap `θ`,
/// the shell cutoff `k`, the tail window `[L, L+h]` and the Z-vector length `C`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventParams {
    pub m_bound: f64,
    pub theta: f64,
    pub k_cut: usize,
    pub l_start: usize,
    pub h: usize,
    pub c_cut: usize,
    #[serde(default = "default_sharpness")]
    pub sharpness: f64,
}

fn default_sharpness() -> f64 {
    1.0
}

impl EventParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.m_bound > 3.0) {
            return Err(Error::invalid(format!("M must exceed 3, got {}", self.m_bound)));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::invalid(format!("θ must lie in (0, 1), got {}", self.theta)));
        }
        if self.k_cut == 0 || self.h == 0 || self.c_cut == 0 || !(self.sharpness > 0.0) {
            return Err(Error::invalid("k_cut, h, C and the sharpness must be positive"));
        }
        Ok(())
    }

    pub fn with_bound(self, m_bound: f64) -> Self {
        EventParams { m_bound, ..self }
    }
}

/// Outcome of the five conditions with the raw values they test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventFlags {
    pub flags: [bool; 5],
    pub gap: f64,
    pub signed_max: f64,
    pub abs_sum: f64,
    pub q_max: f64,
    pub q0: f64,
}

impl EventFlags {
    pub fn all(&self) -> bool {
        self.flags.iter().all(|&f| f)
    }
}

/// Evaluates conditions (i)–(v) of the good event for one configuration.
///
/// Shell sums run over shells `0..=k_cut` with φ̃ in shell 0, so the
/// totals see every outside point up to radius `e^{k_cut}·x2·r0`.
pub fn event_check(split: &InsideOutsideSplit, params: &EventParams, alpha: f64) -> Result<EventFlags> {
    params.validate()?;
    let m = split.m();
    if params.l_start + params.h + m > params.c_cut {
        return Err(Error::invalid(format!(
            "L + h + m = {} exceeds C = {}",
            params.l_start + params.h + m,
            params.c_cut
        )));
    }
    let s_alpha = crate::s_alpha(alpha);
    let pou = build_partition(split.r0, params.k_cut, params.sharpness).with_first_shell(FirstShell::PhiTilde);
    let sums = inverse_power_sums(&split.outside, &pou, s_alpha.max(params.c_cut))?;
    let k = params.k_cut;
    let bound = params.m_bound;

    let signed_max = (1..s_alpha).map(|s| sums.signed_total(s, k).norm()).fold(0.0, f64::max);
    let abs_sum = sums.absolute_total(s_alpha, k);
    let totals: Vec<_> = (1..=params.c_cut).map(|l| sums.signed_total(l, k)).collect();
    let z = z_vector_from_sums(&totals);
    let qf = q_functionals(&z, alpha, m, params.l_start, params.h)?;
    let (q_max, q0) = (qf.q_max(), qf.q0);

    let flags = [
        split.theta_gap >= params.theta,
        signed_max <= bound,
        abs_sum <= bound,
        q_max <= bound,
        1.0 / bound <= q0 && q0 <= bound,
    ];
    Ok(EventFlags { flags, gap: split.theta_gap, signed_max, abs_sum, q_max, q0 })
}
