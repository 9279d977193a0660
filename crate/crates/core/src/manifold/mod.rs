//! Inside configurations with prescribed power sums: completion onto the
//! constraint set, Metropolis chains on it, and the comparison experiments.

mod chain;
mod completion;
mod energy;
mod events;
mod gibbs;

pub use chain::{mcmc_on_manifold, run_chain, ChainConfig, ChainOutput, Target};
pub use completion::{complete_configuration, random_on_manifold, Completion, ConstrainedConfig, COMPLETION_TOL};
pub use energy::{energy_defect, relative_energy_check, EnergyReport, PairMode};
pub use events::{hex_balls, Ball, Event, EventFamily};
pub use gibbs::{gibbs_ratio_experiment, GibbsConfig, GibbsReport, RatioRow};
