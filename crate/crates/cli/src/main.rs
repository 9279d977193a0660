use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gibbsfield_cli::commands::{
    cmd_energy_bound, cmd_gibbs_compare, cmd_manifold_mcmc, cmd_rigidity_scan, cmd_sample, cmd_verify_identities,
    EnergyConfig, GibbsCompareConfig, ManifoldMcmcConfig, Report, RigidityScanConfig, SampleConfig,
};
use gibbsfield_cli::config::{resolve, Overrides};
use gibbsfield_cli::identities::IdentityConfig;
use gibbsfield_cli::output::{emit, Format};
use gibbsfield_cli::CliError;

#[derive(Parser)]
#[command(name = "gibbsfield", version, about = "Zero ensembles, conditional densities and rigidity experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw α-GAF or Ginibre samples.
    Sample(Common),
    /// Check the exact identities and bounds on random samples.
    VerifyIdentities(Common),
    /// Variance of smoothed linear statistics over an (n, R, order) grid.
    RigidityScan(Common),
    /// Compare conditional event frequencies with the Vandermonde kernel.
    GibbsCompare(Common),
    /// Relative-energy defect over constrained pairs.
    EnergyBound(Common),
    /// Metropolis chain on the moment-constrained inside configurations.
    ManifoldMcmc(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Override a configuration key, e.g. `--set params.m_bound=100`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Worker threads; results do not depend on this.
    #[arg(long, env = "GIBBSFIELD_THREADS")]
    threads: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides { seed: self.seed, trials: self.trials, set: self.set.clone() }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let common = match &cli.command {
        Command::Sample(c)
        | Command::VerifyIdentities(c)
        | Command::RigidityScan(c)
        | Command::GibbsCompare(c)
        | Command::EnergyBound(c)
        | Command::ManifoldMcmc(c) => c,
    };
    if let Some(t) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    }
    let file = common.config.as_deref();
    let ov = common.overrides();
    let report: Report = match &cli.command {
        Command::Sample(_) => cmd_sample(&resolve::<SampleConfig>(file, &ov)?)?,
        Command::VerifyIdentities(_) => cmd_verify_identities(&resolve::<IdentityConfig>(file, &ov)?)?,
        Command::RigidityScan(_) => cmd_rigidity_scan(&resolve::<RigidityScanConfig>(file, &ov)?)?,
        Command::GibbsCompare(_) => cmd_gibbs_compare(&resolve::<GibbsCompareConfig>(file, &ov)?)?,
        Command::EnergyBound(_) => cmd_energy_bound(&resolve::<EnergyConfig>(file, &ov)?)?,
        Command::ManifoldMcmc(_) => cmd_manifold_mcmc(&resolve::<ManifoldMcmcConfig>(file, &ov)?)?,
    };
    emit(&report.render(common.format)?, common.out.as_deref())?;
    if !report.summary.is_empty() {
        eprintln!("{}", report.summary);
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
