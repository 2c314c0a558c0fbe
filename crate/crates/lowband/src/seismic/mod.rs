//! Frequency-domain seismic wavefield modeling.
//!
//! The forward chain: a source wavelet `q(t)` drives the 2D Helmholtz
//! equation `−Δû − κ²û = δ·q̂(f)` at each observed frequency; the receiver
//! values become the incomplete Fourier measurements `r` (scaled by `1/√M`)
//! that the solvers invert back to a seismogram.  Only low frequencies are
//! ever solved — the whole point of the sparse reconstruction.

mod banded;
mod greens;
mod grid;
mod helmholtz;
mod pipeline;
mod velocity;
mod wavelet;

pub use greens::{greens_2d, hankel1_0};
pub use grid::TimeGrid;
pub use helmholtz::{helmholtz_solve, HelmholtzField, HelmholtzProblem};
pub use pipeline::{
    assemble_measurements, auto_reg_params, dalembert_seismogram, fd_receiver_spectra,
    first_arrival_sample,
    generate_shot_record, greens_receiver_spectra, reconstruct_seismogram, record_from_spectra,
    shot_record_spectra, Method, Seismogram, ShotRecord,
};
pub use velocity::VelocityModel;
pub use wavelet::{gaussian_deriv, gaussian_deriv_ft, quadrature_ft, ricker, SourceWavelet};
