//! Scoring, seeded noise, experiment runners, and report plumbing.

mod experiments;
mod metrics;
mod report;

pub use experiments::{
    first_arrival_error, gaussian_measurements, gaussian_signal, layered_model,
    layered_receivers, run_homogeneous, run_layered, run_layered_at, run_table1, run_table2,
    run_table2_cases, run_table3, signal_grid, El0mRecipe, HomogeneousRun, L1mRecipe,
    LayeredModelKind, LayeredRun, Scenario, SpectraMode, SEISMIC_MAX_LAG, TABLE1_FRACTIONS,
    TABLE1_TRIALS, TABLE3_EL0M_NOISY, TABLE3_SIGMAS, TABLE3_TRIALS, TABLE_EL0M, TABLE_FMAX,
    TABLE_L1M,
};
pub use metrics::{add_noise, aligned_snr, scaled_snr, snr, NoiseSpec};
pub use report::{AggregateRow, ExperimentReport, ReportRow};
