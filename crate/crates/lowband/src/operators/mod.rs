//! Linear operators of the inversion problem.
//!
//! The composite measurement operator is `K = R·F·W*`: framelet synthesis
//! `W*` maps `N = (2L+1)·M` real coefficients to a length-`M` real signal,
//! the unitary DFT `F` takes it to the frequency domain, and the row selector
//! `R` keeps the `d` observed rows.  Because `W` is a tight frame
//! (`W*W = I`), `F` is unitary, and `R` selects distinct rows, `K K* = I_d`
//! and `K*K` is a real idempotent matrix — which gives `I + cK*K` the exact
//! inverse used by [`MeasurementOperator::normal_solve`].

mod fourier;
mod framelet;
mod measurement;
mod sampling;

pub use fourier::{dft_adjoint, dft_apply, FourierSpec};
pub use framelet::{framelet_analysis, framelet_synthesis, FrameletSystem};
pub use measurement::MeasurementOperator;
pub use sampling::{
    build_band_plan, build_band_plan_snapped, build_random_plan, select, select_adjoint,
    SamplingPlan,
};
