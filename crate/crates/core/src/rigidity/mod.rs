//! Rigidity statistics of zero sets: localized inverse power sums, the
//! Q-functionals of Z-vectors, event predicates and the variance scan.

mod events;
mod partition;
mod qfun;
mod scan;
mod sums;

pub use events::{event_check, EventFlags, EventParams};
pub use partition::{build_partition, smooth_step, FirstShell, PartitionOfUnity, X1, X2, X3};
pub use qfun::{q_functionals, QFunctionals};
pub use scan::{rigidity_scan, log_ramp_cutoff, ScanConfig, ScanRow, ScanTable};
pub use sums::{
    inverse_power_sums, x_statistic, z_vector_from_sums, z_vector_truncated, z_vector_untruncated, RigidityStats,
    ShellSums,
};
