//! Exact identities and rigorous bounds, checked on random samples.

use std::f64::consts::LN_2;

use gibbsfield::conditional::{
    cross_log_ratio, cross_vandermonde_logbound, rec_identity_terms, sym_ratio_envelope, tail_term, weight_recursion,
};
use gibbsfield::ensembles::{moment_vector, sample_alpha_gaf, split_points, EnsembleSample};
use gibbsfield::manifold::random_on_manifold;
use gibbsfield::numerics::{
    elem_sym_all, log_binom_kfact_alpha, log_factorials, log_sum_exp, newton_e_from_p, power_sums, ScaledSym,
};
use gibbsfield::rigidity::{build_partition, inverse_power_sums, FirstShell};
use gibbsfield::rng::{stream, substream, uniform_in_disk};
use gibbsfield::{r_alpha, Complex64, Result};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Names accepted in [`IdentityConfig::suites`].
pub const SUITES: [&str; 9] =
    ["coef_root", "norm", "product", "newton", "rec", "tail", "cross_vandermonde", "fb_envelope", "partition"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdentityConfig {
    pub suites: Vec<String>,
    pub seed: u64,
    pub alphas: Vec<f64>,
    pub ns: Vec<usize>,
    /// Samples per (α, n) for the coefficient identities.
    pub samples: usize,
    pub rec_ns: Vec<usize>,
    pub rec_samples: usize,
    pub newton_sets: usize,
    pub newton_max_m: usize,
    pub vandermonde_trials: usize,
    pub envelope_pairs: usize,
    pub grid_points: usize,
    /// Relative perturbation applied to the even-index coefficients before
    /// comparison; nonzero values must make the coefficient checks fail.
    pub perturb: f64,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig {
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            seed: 0,
            alphas: vec![0.5, 1.0, 2.0],
            ns: vec![16, 32, 64],
            samples: 200,
            rec_ns: vec![16, 24, 32, 40],
            rec_samples: 100,
            newton_sets: 1000,
            newton_max_m: 12,
            vandermonde_trials: 10_000,
            envelope_pairs: 10_000,
            grid_points: 1000,
            perturb: 0.0,
        }
    }
}

/// Worst case of one identity over its cases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub identity: String,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityResult {
    fn new(identity: &str, worsts: &[f64], tolerance: f64) -> Self {
        // NaN counts as a failure.
        let worst = worsts.iter().copied().fold(0.0, |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) });
        IdentityResult { identity: identity.to_string(), cases: worsts.len(), worst, tolerance, pass: worst <= tolerance }
    }
}

const TAG_COEF: u64 = 101;
const TAG_NEWTON: u64 = 102;
const TAG_REC: u64 = 103;
const TAG_VAN: u64 = 104;
const TAG_ENV: u64 = 105;
const TAG_POU: u64 = 106;

fn perturbed(xi: &[Complex64], eps: f64) -> Vec<Complex64> {
    xi.iter().enumerate().map(|(k, x)| if k % 2 == 0 { x * (1.0 + eps) } else { *x }).collect()
}

fn gaf_samples(cfg: &IdentityConfig, alpha_idx: usize, n: usize, count: usize, tag: u64) -> Result<Vec<EnsembleSample>> {
    let alpha = cfg.alphas[alpha_idx];
    (0..count)
        .into_par_iter()
        .map(|t| sample_alpha_gaf(n, alpha, substream(&[cfg.seed, tag, alpha_idx as u64, n as u64, t as u64])))
        .collect()
}

fn ln_abs(z: Complex64) -> f64 {
    z.norm().ln()
}

/// `e_k(roots)/(C(n,k)k!)^{α/2} = (−1)^k ξ_{n−k}/ξ_n`, residual scaled by `1 + |ξ_{n−k}/ξ_n|`.
pub fn coef_root_residual(s: &EnsembleSample, alpha: f64, perturb: f64) -> f64 {
    let n = s.n;
    let xi = perturbed(&s.coeffs, perturb);
    let sym = ScaledSym::from_points(&s.points);
    (0..=n)
        .map(|k| {
            let scale = (k as f64 * sym.shift as f64 * LN_2 - log_binom_kfact_alpha(n, k, alpha)).exp();
            let lhs = sym.scaled[k] * scale;
            let q = xi[n - k] / xi[n];
            let rhs = if k % 2 == 0 { q } else { -q };
            (lhs - rhs).norm() / (1.0 + q.norm())
        })
        .fold(0.0, f64::max)
}

/// `Σ_k |e_k|²/(C(n,k)k!)^α = Σ_l |ξ_l|²/|ξ_n|²`, relative error.
pub fn norm_residual(s: &EnsembleSample, alpha: f64, perturb: f64) -> f64 {
    let n = s.n;
    let xi = perturbed(&s.coeffs, perturb);
    let sym = ScaledSym::from_points(&s.points);
    let lhs = log_sum_exp(&(0..=n).map(|k| 2.0 * sym.log_abs(k) - 2.0 * log_binom_kfact_alpha(n, k, alpha)).collect::<Vec<_>>());
    let rhs = log_sum_exp(&xi.iter().map(|x| 2.0 * ln_abs(*x)).collect::<Vec<_>>()) - 2.0 * ln_abs(xi[n]);
    (lhs - rhs).exp_m1().abs()
}

/// `Σ_k |e_k(ζ,ω)/e_{n−m}(ω)|²((n−k)!)^α = |Π_in|²/|ξ_0|²·Σ_k |ξ_k|²`
/// for the split at the unit circle, relative error.
pub fn product_residual(s: &EnsembleSample, alpha: f64, perturb: f64) -> Result<f64> {
    let n = s.n;
    let xi = perturbed(&s.coeffs, perturb);
    let split = split_points(&s.points, 1.0)?;
    let all = ScaledSym::from_points(&s.points);
    let om = ScaledSym::from_points(&split.outside);
    let lf = log_factorials(n);
    let ln_eo = om.log_abs(split.outside.len());
    let lhs = log_sum_exp(&(0..=n).map(|k| 2.0 * (all.log_abs(k) - ln_eo) + alpha * lf[n - k]).collect::<Vec<_>>());
    let ln_pin: f64 = split.inside.iter().map(|z| ln_abs(*z)).sum();
    let rhs = 2.0 * ln_pin - 2.0 * ln_abs(xi[0]) + log_sum_exp(&xi.iter().map(|x| 2.0 * ln_abs(*x)).collect::<Vec<_>>());
    Ok((lhs - rhs).exp_m1().abs())
}

/// Power sums from elementary symmetric functions by Newton's identities.
fn p_from_e(e: &[Complex64], k: usize) -> Vec<Complex64> {
    let m = e.len() - 1;
    let ek = |i: usize| if i <= m { e[i] } else { Complex64::new(0.0, 0.0) };
    let mut p: Vec<Complex64> = Vec::with_capacity(k);
    for j in 1..=k {
        let mut acc = ek(j) * j as f64 * if j % 2 == 1 { 1.0 } else { -1.0 };
        for i in 1..j {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += ek(i) * p[j - i - 1] * sign;
        }
        p.push(acc);
    }
    p
}

/// Round trip p → e → p on random point sets with `m ≤ max_m`; each
/// direction is measured against the largest entry of its target vector.
pub fn newton_roundtrip(cfg: &IdentityConfig) -> Vec<f64> {
    (0..cfg.newton_sets)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(cfg.seed, substream(&[TAG_NEWTON, t as u64]));
            let m = rng.gen_range(1..=cfg.newton_max_m);
            let radius = rng.gen_range(0.1..2.0);
            let pts: Vec<Complex64> = (0..m).map(|_| uniform_in_disk(&mut rng, radius)).collect();
            let e = elem_sym_all(&pts);
            let p = power_sums(&pts, m);
            let e_back = newton_e_from_p(&p);
            let scale_e = e[1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
            let err_e = (1..=m).map(|k| (e_back[k - 1] - e[k]).norm()).fold(0.0, f64::max) / scale_e;
            let p_back = p_from_e(&e, m);
            let scale_p = p.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let err_p = p.iter().zip(&p_back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale_p;
            err_e.max(err_p)
        })
        .collect()
}

/// `Σ_r (−1)^{n−l−r} w_r ξ_{l+r}/π_α[l;r] = ξ_n·e_{n−l}(ω)/c_{n−l}` for every `l`,
/// relative to `Σ |terms|`. Returns (identity residual, tail-term residual).
pub fn rec_residuals(s: &EnsembleSample, alpha: f64, perturb: f64) -> Result<(f64, f64)> {
    let n = s.n;
    let xi = perturbed(&s.coeffs, perturb);
    let split = split_points(&s.points, 1.0)?;
    let w = weight_recursion(&split.inside, n);
    let eo = elem_sym_all(&split.outside);
    let mut worst_id: f64 = 0.0;
    let mut worst_tail: f64 = 0.0;
    for l in 0..=n {
        let terms = rec_identity_terms(l, n, &w, &xi, alpha);
        let sum: Complex64 = terms.iter().sum();
        let mag: f64 = terms.iter().map(|t| t.norm()).sum();
        let k = n - l;
        let rhs = if k < eo.len() { xi[n] * eo[k] / log_binom_kfact_alpha(n, k, alpha).exp() } else { Complex64::new(0.0, 0.0) };
        worst_id = worst_id.max((sum - rhs).norm() / (mag + rhs.norm()));

        // Brute force: π_α[l;r] as an explicit product, plain summation.
        let ra = r_alpha(alpha);
        let mut brute = Complex64::new(0.0, 0.0);
        let mut bmag = 0.0;
        if l + ra <= n {
            for r in ra..=n - l {
                let pi: f64 = (1..=r).map(|i| ((l + i) as f64).powf(alpha / 2.0)).product();
                let t = w.w[r] * xi[l + r] / pi;
                brute += if r % 2 == 0 { t } else { -t };
                bmag += t.norm();
            }
        }
        let tail = tail_term(l, n, &w, &xi, alpha);
        worst_tail = worst_tail.max((tail - brute).norm() / bmag.max(f64::MIN_POSITIVE));
    }
    Ok((worst_id, worst_tail))
}

/// `|Σ_j ln|1 − ζ0/ω_j|| / bound` over random outside configurations with
/// gap θ ∈ [0.05, 0.5] at r0 = 1; the bound holds when this is at most 1.
pub fn cross_vandermonde_ratios(cfg: &IdentityConfig) -> Result<Vec<f64>> {
    let r0 = 1.0;
    (0..cfg.vandermonde_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(cfg.seed, substream(&[TAG_VAN, t as u64]));
            let alpha = cfg.alphas[t % cfg.alphas.len()];
            let theta = rng.gen_range(0.05..=0.5);
            let count = rng.gen_range(1..50usize);
            let omega: Vec<Complex64> = (0..count)
                .map(|j| {
                    let extra = if j == 0 { 0.0 } else { -rng.gen::<f64>().ln() * 2.0 };
                    Complex64::from_polar(r0 + theta + extra, rng.gen_range(0.0..std::f64::consts::TAU))
                })
                .collect();
            // Half of the trials put ζ0 next to the closest outside point.
            let zeta0 = if t % 2 == 0 {
                uniform_in_disk(&mut rng, r0)
            } else {
                Complex64::from_polar(r0 * (1.0 - 1e-9), omega[0].arg())
            };
            let gap = omega.iter().map(|w| w.norm() - r0).fold(f64::INFINITY, f64::min);
            let bound = cross_vandermonde_logbound(&omega, r0, gap, r_alpha(alpha))?;
            Ok(cross_log_ratio(zeta0, &omega).abs() / bound)
        })
        .collect()
}

/// `|D(ζ′;ω)/D(ζ;ω) − 1| / FB` over pairs on the same moment set, taken from
/// α-GAF samples split at r0 = 1; the envelope holds when this is at most 1.
pub fn fb_envelope_ratios(cfg: &IdentityConfig) -> Result<Vec<f64>> {
    const PER_SAMPLE: usize = 10;
    let samples = cfg.envelope_pairs.div_ceil(PER_SAMPLE);
    let chunks: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>> {
            let alpha = cfg.alphas[t % cfg.alphas.len()];
            let k = r_alpha(alpha) - 1;
            let mut attempt = 0u64;
            // Draw until the inside has room to move on its moment set.
            let split = loop {
                let n = 16 + (t + attempt as usize) % 33;
                let s = sample_alpha_gaf(n, alpha, substream(&[cfg.seed, TAG_ENV, t as u64, attempt]))?;
                let split = split_points(&s.points, 1.0)?;
                attempt += 1;
                if split.m() > k {
                    break split;
                }
            };
            let mv = moment_vector(&split, alpha);
            let mut rng = stream(cfg.seed, substream(&[TAG_ENV, t as u64, u64::MAX]));
            let want = PER_SAMPLE.min(cfg.envelope_pairs - t * PER_SAMPLE);
            let mut out = Vec::with_capacity(want);
            for _ in 0..want {
                let other = random_on_manifold(&mut rng, split.m(), &mv.s, 1.0, 1_000_000)?;
                let env = sym_ratio_envelope(&split.inside, &other, &split.outside, alpha)?;
                let gap = (env.ratio - 1.0).abs();
                out.push(if gap == 0.0 { 0.0 } else { gap / env.fb });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Worst `|Σ_j φ_j − 1|` on a radial grid over the asserted range, for both
/// choices of the first shell, and the worst relative error of reassembling
/// `Σ_z z^{−l}` from shell sums over points in that range.
pub fn partition_residuals(cfg: &IdentityConfig) -> Result<(f64, f64)> {
    let mut worst_total: f64 = 0.0;
    let mut worst_shell: f64 = 0.0;
    for (i, (r0, shells, sharp)) in [(1.0, 5, 1.0), (0.7, 4, 2.5), (2.0, 6, 0.5)].into_iter().enumerate() {
        for first in [FirstShell::Phi, FirstShell::PhiTilde] {
            let pou = build_partition(r0, shells, sharp).with_first_shell(first);
            let (a, b) = pou.asserted_range();
            let g = cfg.grid_points.max(2);
            for q in 0..g {
                let r = a + (b - a) * q as f64 / (g - 1) as f64;
                worst_total = worst_total.max((pou.total(r) - 1.0).abs());
            }
            let mut rng = stream(cfg.seed, substream(&[TAG_POU, i as u64]));
            let pts: Vec<Complex64> = (0..200)
                .map(|_| Complex64::from_polar(rng.gen_range(a..b), rng.gen_range(0.0..std::f64::consts::TAU)))
                .collect();
            let sums = inverse_power_sums(&pts, &pou, 4)?;
            for l in 1..=4 {
                let direct: Complex64 = pts.iter().map(|z| z.powi(-(l as i32))).sum();
                let scale: f64 = pts.iter().map(|z| z.norm().powi(-(l as i32))).sum();
                let got = sums.signed_total(l, shells);
                worst_shell = worst_shell.max((got - direct).norm() / scale);
            }
        }
    }
    Ok((worst_total, worst_shell))
}

/// Runs the selected suites.
pub fn run_identities(cfg: &IdentityConfig) -> Result<Vec<IdentityResult>> {
    let want = |name: &str| cfg.suites.iter().any(|s| s == name);
    let mut out = Vec::new();
    if want("coef_root") || want("norm") || want("product") {
        let (mut coef, mut norm, mut prod) = (Vec::new(), Vec::new(), Vec::new());
        for (ai, &alpha) in cfg.alphas.iter().enumerate() {
            for &n in &cfg.ns {
                for s in gaf_samples(cfg, ai, n, cfg.samples, TAG_COEF)? {
                    coef.push(coef_root_residual(&s, alpha, cfg.perturb));
                    norm.push(norm_residual(&s, alpha, cfg.perturb));
                    prod.push(product_residual(&s, alpha, cfg.perturb)?);
                }
            }
        }
        if want("coef_root") {
            out.push(IdentityResult::new("coef_root", &coef, 1e-8));
        }
        if want("norm") {
            out.push(IdentityResult::new("norm", &norm, 1e-8));
        }
        if want("product") {
            out.push(IdentityResult::new("product", &prod, 1e-8));
        }
    }
    if want("newton") {
        out.push(IdentityResult::new("newton", &newton_roundtrip(cfg), 1e-10));
    }
    if want("rec") || want("tail") {
        let (mut id, mut tail) = (Vec::new(), Vec::new());
        for (ai, &alpha) in cfg.alphas.iter().enumerate() {
            for &n in &cfg.rec_ns {
                for s in gaf_samples(cfg, ai, n, cfg.rec_samples, TAG_REC)? {
                    let (a, b) = rec_residuals(&s, alpha, cfg.perturb)?;
                    id.push(a);
                    tail.push(b);
                }
            }
        }
        if want("rec") {
            out.push(IdentityResult::new("rec", &id, 1e-6));
        }
        if want("tail") {
            out.push(IdentityResult::new("tail", &tail, 1e-10));
        }
    }
    if want("cross_vandermonde") {
        out.push(IdentityResult::new("cross_vandermonde", &cross_vandermonde_ratios(cfg)?, 1.0));
    }
    if want("fb_envelope") {
        out.push(IdentityResult::new("fb_envelope", &fb_envelope_ratios(cfg)?, 1.0));
    }
    if want("partition") {
        let (a, b) = partition_residuals(cfg)?;
        out.push(IdentityResult::new("partition", &[a], 1e-10));
        out.push(IdentityResult::new("shell_reassembly", &[b], 1e-10));
    }
    Ok(out)
}
