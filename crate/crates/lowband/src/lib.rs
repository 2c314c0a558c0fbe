//! Recover real time-domain signals from incomplete Fourier data.
//!
//! The measurement model is `K y = r` where `K = R·F·W*` composes a tight
//! framelet synthesis `W*`, the unitary DFT `F`, and a conjugate-closed row
//! selector `R`.  Only a subset of DFT rows is observed — typically a low
//! frequency band, as produced by frequency-domain seismic modeling where each
//! observed frequency costs one Helmholtz solve.  Reconstruction promotes
//! sparsity of the framelet coefficients through the Moreau envelope of the
//! `ℓ0` counting norm (solved by a fixed-point proximity iteration, "EL0M")
//! or through the `ℓ1` norm (solved by FISTA, "L1M").
//!
//! Module map:
//! - [`operators`]: DFT, row selector, undecimated tight framelet, and the
//!   composite measurement operator `K` with its exact normal-equation solve.
//! - [`regularization`]: `ℓ0` prox / Moreau envelope / soft threshold and the
//!   objective functions tracked by the solvers.
//! - [`solvers`]: the EL0M fixed-point iteration and the FISTA baseline, with
//!   full per-iteration traces.
//! - [`seismic`]: source wavelets, the 2D Helmholtz finite-difference solver
//!   with PML, analytic oracles, and the measurement-assembly pipelines.
//! - [`evaluation`]: SNR scoring, seeded noise, and the experiment runners.
//! - [`cli`]: the command-line front end used by the `lowband` binary.
//!
//! See the crate `examples/` directory for runnable end-to-end demonstrations
//! of each capability.

pub mod cli;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod operators;
pub mod regularization;
pub mod seismic;
pub mod selftest;
pub mod solvers;

pub use error::{Error, Result};
