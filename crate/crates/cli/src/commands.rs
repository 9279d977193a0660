//! The subcommands. Each resolves to a header plus a list of records, and
//! reports whether its checks passed.

use gibbsfield::ensembles::{moment_vector, sample_alpha_gaf, sample_ginibre, split_disk, EnsembleKind};
use gibbsfield::manifold::{
    gibbs_ratio_experiment, hex_balls, mcmc_on_manifold, relative_energy_check, ChainConfig, Event, EventFamily,
    GibbsConfig, PairMode, Target,
};
use gibbsfield::rigidity::{rigidity_scan, EventParams, ScanConfig};
use gibbsfield::rng::{stream, substream};
use gibbsfield::{r_alpha, Complex64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::identities::{run_identities, IdentityConfig, SUITES};
use crate::output::{to_values, Format, Header};

/// What a command produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub header: Header,
    pub records: Vec<Value>,
    /// Records for CSV output when they differ from the JSON ones.
    pub csv_records: Option<Vec<Value>>,
    pub passed: bool,
    pub summary: String,
}

impl Report {
    fn new<T: Serialize>(command: &str, seed: Option<u64>, cfg: &T, records: Vec<Value>) -> Self {
        Report { header: Header::new(command, seed, cfg), records, csv_records: None, passed: true, summary: String::new() }
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        let recs = match (format, &self.csv_records) {
            (Format::Csv, Some(r)) => r,
            _ => &self.records,
        };
        crate::output::render(&self.header, recs, format)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleConfig {
    pub kind: EnsembleKind,
    pub n: usize,
    pub alpha: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { kind: EnsembleKind::AlphaGaf, n: 64, alpha: 1.0, trials: 1, seed: 0 }
    }
}

/// Sample `t` uses seed `substream([seed, t])`.
pub fn cmd_sample(cfg: &SampleConfig) -> Result<Report, CliError> {
    if cfg.trials == 0 {
        return Err(CliError::config("trials must be positive"));
    }
    let samples = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let seed = substream(&[cfg.seed, t as u64]);
            match cfg.kind {
                EnsembleKind::AlphaGaf => sample_alpha_gaf(cfg.n, cfg.alpha, seed),
                EnsembleKind::Ginibre => sample_ginibre(cfg.n, seed),
            }
        })
        .collect::<gibbsfield::Result<Vec<_>>>()?;
    let mut csv = Vec::new();
    for (t, s) in samples.iter().enumerate() {
        for (i, z) in s.points.iter().enumerate() {
            csv.push(json!({"sample": t, "seed": s.seed, "index": i, "re": z.re, "im": z.im}));
        }
    }
    let mut r = Report::new("sample", Some(cfg.seed), cfg, to_values(&samples));
    r.csv_records = Some(csv);
    r.summary = format!("{} {} samples of size {}", samples.len(), cfg.kind, cfg.n);
    Ok(r)
}

pub fn cmd_verify_identities(cfg: &IdentityConfig) -> Result<Report, CliError> {
    if cfg.suites.is_empty() {
        return Err(CliError::config("no identity suite selected"));
    }
    if let Some(bad) = cfg.suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
        return Err(CliError::config(format!("unknown suite `{bad}`; known: {}", SUITES.join(", "))));
    }
    if cfg.alphas.is_empty() || cfg.alphas.iter().any(|a| !(*a > 0.0)) {
        return Err(CliError::config("alphas must be a non-empty list of positive numbers"));
    }
    let results = run_identities(cfg)?;
    let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.identity.as_str()).collect();
    let mut r = Report::new("verify-identities", Some(cfg.seed), cfg, to_values(&results));
    r.passed = failed.is_empty();
    r.summary = if failed.is_empty() {
        format!("{} identities hold", results.len())
    } else {
        format!("failed: {}", failed.join(", "))
    };
    Ok(r)
}

/// Wrapper so the scan has defaults and rejects unknown keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RigidityScanConfig {
    pub kind: EnsembleKind,
    pub alpha: f64,
    pub n_grid: Vec<usize>,
    pub r_grid: Vec<f64>,
    pub orders: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub r0: f64,
    pub sharpness: f64,
}

impl Default for RigidityScanConfig {
    fn default() -> Self {
        RigidityScanConfig {
            kind: EnsembleKind::AlphaGaf,
            alpha: 1.0,
            n_grid: vec![256],
            r_grid: vec![2.0, 4.0, 6.0],
            orders: vec![0, 1, 2],
            trials: 400,
            seed: 0,
            r0: 1.0,
            sharpness: 1.0,
        }
    }
}

impl From<&RigidityScanConfig> for ScanConfig {
    fn from(c: &RigidityScanConfig) -> Self {
        ScanConfig {
            kind: c.kind,
            alpha: c.alpha,
            n_grid: c.n_grid.clone(),
            r_grid: c.r_grid.clone(),
            orders: c.orders.clone(),
            trials: c.trials,
            seed: c.seed,
            r0: c.r0,
            sharpness: c.sharpness,
        }
    }
}

pub fn cmd_rigidity_scan(cfg: &RigidityScanConfig) -> Result<Report, CliError> {
    if cfg.r_grid.iter().any(|r| !r.is_finite()) || !(cfg.r0 > 0.0) || !(cfg.sharpness > 0.0) {
        return Err(CliError::config("R grid, r0 and sharpness must be finite and positive"));
    }
    let table = rigidity_scan(&cfg.into())?;
    let mut r = Report::new("rigidity-scan", Some(cfg.seed), cfg, to_values(&table.rows));
    let mut lines = Vec::new();
    for &n in &cfg.n_grid {
        for &j in &cfg.orders {
            if let Some(d) = table.decay(n, j) {
                lines.push(format!("n={n} order={j}: variance ratio {:.3}, separated {}", d.factor, d.separated));
            }
        }
    }
    r.summary = lines.join("\n");
    Ok(r)
}

/// Which events the Gibbs comparison uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventFamilyKind {
    /// `events` random unions of ball triples from a hexagonal layout.
    Random,
    /// The whole space only.
    Full,
    /// One random event and its complement.
    Complement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GibbsCompareConfig {
    pub alpha: f64,
    pub n: usize,
    pub r0: f64,
    pub m: usize,
    pub params: EventParams,
    pub trials: usize,
    pub seed: u64,
    pub family: EventFamilyKind,
    pub events: usize,
    pub event_seed: u64,
    pub kernel_steps: usize,
    pub kernel_burn_in: usize,
    pub kernel_thin: usize,
    pub step_size: f64,
}

impl Default for GibbsCompareConfig {
    fn default() -> Self {
        GibbsCompareConfig {
            alpha: 1.0,
            n: 128,
            r0: 3f64.sqrt(),
            m: 3,
            params: EventParams { m_bound: 1e3, theta: 0.05, k_cut: 4, l_start: 4, h: 4, c_cut: 12, sharpness: 1.0 },
            trials: 2000,
            seed: 7,
            family: EventFamilyKind::Random,
            events: 16,
            event_seed: 2024,
            kernel_steps: 2000,
            kernel_burn_in: 300,
            kernel_thin: 2,
            step_size: 0.3,
        }
    }
}

impl GibbsCompareConfig {
    pub fn event_list(&self) -> Result<Vec<Event>, CliError> {
        let mut rng = stream(self.event_seed, 0);
        let balls = hex_balls(self.r0);
        match self.family {
            EventFamilyKind::Full => Ok(vec![Event::Full]),
            EventFamilyKind::Random => {
                if self.events == 0 {
                    return Err(CliError::config("events must be positive"));
                }
                Ok(EventFamily::random_unions(&mut rng, &balls, self.m, self.events)?.events)
            }
            EventFamilyKind::Complement => {
                let a = EventFamily::random_unions(&mut rng, &balls, self.m, 1)?.events.remove(0);
                Ok(vec![a.clone(), a.complement()])
            }
        }
    }

    pub fn core(&self) -> GibbsConfig {
        GibbsConfig {
            alpha: self.alpha,
            n: self.n,
            r0: self.r0,
            m: self.m,
            params: self.params,
            trials: self.trials,
            seed: self.seed,
            kernel_steps: self.kernel_steps,
            kernel_burn_in: self.kernel_burn_in,
            kernel_thin: self.kernel_thin,
            step_size: self.step_size,
        }
    }
}

pub fn cmd_gibbs_compare(cfg: &GibbsCompareConfig) -> Result<Report, CliError> {
    if cfg.trials == 0 {
        return Err(CliError::config("trials must be positive"));
    }
    let events = cfg.event_list()?;
    let rep = gibbs_ratio_experiment(&cfg.core(), &events)?;
    let mut records = to_values(&rep.rows);
    let summary = json!({
        "summary": {
            "trials": rep.trials,
            "passing": rep.passing,
            "wrong_count": rep.wrong_count,
            "failed_checks": rep.failed_checks,
            "spread": rep.spread,
        }
    });
    let mut r = Report::new("gibbs-compare", Some(cfg.seed), cfg, Vec::new());
    r.csv_records = Some(records.clone());
    records.push(summary);
    r.records = records;
    r.passed = rep.spread.is_finite();
    r.summary = format!("{} of {} samples passed the checks; ratio spread {:.4}", rep.passing, rep.trials, rep.spread);
    Ok(r)
}

/// Where the outside configuration comes from: either given explicitly
/// (`omega`, `m` and `s` together) or taken from one α-GAF sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutsideSpec {
    pub alpha: f64,
    pub n: usize,
    pub r0: f64,
    pub sample_seed: u64,
    pub omega: Option<Vec<Complex64>>,
    pub m: Option<usize>,
    pub s: Option<Vec<Complex64>>,
}

impl Default for OutsideSpec {
    fn default() -> Self {
        OutsideSpec { alpha: 1.0, n: 128, r0: 3f64.sqrt(), sample_seed: 0, omega: None, m: None, s: None }
    }
}

/// Resolved `(ω, m, s, inside)`; `inside` is known only for sampled outsides.
type Outside = (Vec<Complex64>, usize, Vec<Complex64>, Option<Vec<Complex64>>);

impl OutsideSpec {
    pub fn resolve(&self) -> Result<Outside, CliError> {
        let k = r_alpha(self.alpha) - 1;
        match &self.omega {
            Some(om) => {
                let m = self.m.ok_or_else(|| CliError::config("explicit omega needs m"))?;
                let s = self.s.clone().ok_or_else(|| CliError::config("explicit omega needs the moment vector s"))?;
                if s.len() != k {
                    return Err(CliError::config(format!("s must have {k} entries for alpha = {}", self.alpha)));
                }
                if om.iter().any(|w| !(w.norm() > self.r0)) {
                    return Err(CliError::config("omega points must lie outside the disk"));
                }
                Ok((om.clone(), m, s, None))
            }
            None => {
                if self.m.is_some() || self.s.is_some() {
                    return Err(CliError::config("m and s are only used together with an explicit omega"));
                }
                let sample = sample_alpha_gaf(self.n, self.alpha, self.sample_seed)?;
                let split = split_disk(&sample, self.r0)?;
                let s = moment_vector(&split, self.alpha).s;
                Ok((split.outside.clone(), split.m(), s, Some(split.inside)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergyConfig {
    pub outside: OutsideSpec,
    pub pairs: usize,
    /// Ascent steps per pair; 0 draws plain uniform pairs.
    pub ascent_steps: usize,
    pub seed: u64,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        EnergyConfig { outside: OutsideSpec::default(), pairs: 2000, ascent_steps: 800, seed: 0 }
    }
}

impl EnergyConfig {
    pub fn mode(&self) -> PairMode {
        if self.ascent_steps == 0 {
            PairMode::Uniform
        } else {
            PairMode::Ascent { steps: self.ascent_steps }
        }
    }
}

pub fn cmd_energy_bound(cfg: &EnergyConfig) -> Result<Report, CliError> {
    let (omega, m, s, _) = cfg.outside.resolve()?;
    if m <= s.len() {
        return Err(CliError::config(format!("m = {m} leaves no free points for {} moments", s.len())));
    }
    let o = &cfg.outside;
    let rep = relative_energy_check(&omega, m, &s, o.alpha, o.r0, cfg.pairs, cfg.mode(), cfg.seed)?;
    let rows: Vec<Value> = rep.growth.iter().map(|(p, d)| json!({"pairs": p, "max_defect": d})).collect();
    let mut r = Report::new("energy-bound", Some(cfg.seed), cfg, rows);
    r.passed = rep.max_defect.is_finite();
    r.summary = match rep.last_doubling_change() {
        Some(c) => format!("max defect {:.6} over {} pairs, change on the last doubling {:.4}", rep.max_defect, rep.pairs, c),
        None => format!("max defect {:.6} over {} pairs", rep.max_defect, rep.pairs),
    };
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ManifoldMcmcConfig {
    pub outside: OutsideSpec,
    pub target: Target,
    pub steps: usize,
    pub burn_in: usize,
    pub step_size: f64,
    pub thin: usize,
    pub seed: u64,
    pub audit: bool,
}

impl Default for ManifoldMcmcConfig {
    fn default() -> Self {
        ManifoldMcmcConfig {
            outside: OutsideSpec { n: 32, r0: 2.0, ..OutsideSpec::default() },
            target: Target::ExactConditional,
            steps: 10_000,
            burn_in: 1000,
            step_size: 0.3,
            thin: 10,
            seed: 0,
            audit: true,
        }
    }
}

impl ManifoldMcmcConfig {
    pub fn chain(&self, m: usize) -> ChainConfig {
        ChainConfig {
            m,
            alpha: self.outside.alpha,
            r0: self.outside.r0,
            target: self.target,
            steps: self.steps,
            burn_in: self.burn_in,
            step_size: self.step_size,
            thin: self.thin,
            seed: self.seed,
            audit: self.audit,
        }
    }
}

/// Audit tolerance for the cached log-ratio against direct evaluation.
pub const AUDIT_TOL: f64 = 1e-10;

pub fn cmd_manifold_mcmc(cfg: &ManifoldMcmcConfig) -> Result<Report, CliError> {
    let (omega, m, s, inside) = cfg.outside.resolve()?;
    if m <= s.len() {
        return Err(CliError::config(format!("m = {m} leaves no free points for {} moments", s.len())));
    }
    let out = mcmc_on_manifold(&omega, &s, inside.as_deref(), &cfg.chain(m))?;
    let mut records: Vec<Value> =
        out.samples.iter().enumerate().map(|(i, z)| json!({"sample": i, "points": z})).collect();
    let mut csv = Vec::new();
    for (i, z) in out.samples.iter().enumerate() {
        for (j, w) in z.iter().enumerate() {
            csv.push(json!({"sample": i, "index": j, "re": w.re, "im": w.im}));
        }
    }
    records.push(json!({ "stats": out.stats }));
    let mut r = Report::new("manifold-mcmc", Some(cfg.seed), cfg, records);
    r.csv_records = Some(csv);
    r.passed = out.stats.audit_gap.is_none_or(|g| g <= AUDIT_TOL);
    r.summary = format!(
        "acceptance {:.3}, step size {:.4}, audit gap {}",
        out.stats.acceptance_rate(),
        out.stats.step_size,
        out.stats.audit_gap.map_or("n/a".to_string(), |g| format!("{g:.3e}"))
    );
    Ok(r)
}
