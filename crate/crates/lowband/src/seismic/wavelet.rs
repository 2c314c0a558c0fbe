//! Source wavelets and the rectangle-rule Fourier transform.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::grid::TimeGrid;

/// Seismic source time function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceWavelet {
    /// `(1 − 2π²f0²t²)·exp(−π²f0²t²)`, centered at `t = 0`.
    Ricker { f0: f64 },
    /// `−2α̃(t−t0)·exp(−α̃(t−t0)²)` — derivative of a Gaussian.
    GaussianDeriv { t0: f64, alpha: f64 },
}

impl SourceWavelet {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SourceWavelet::Ricker { f0 } if !(f0 > 0.0) => {
                Err(Error::validation("Ricker wavelet requires f0 > 0"))
            }
            SourceWavelet::GaussianDeriv { alpha, .. } if !(alpha > 0.0) => {
                Err(Error::validation("Gaussian derivative requires alpha > 0"))
            }
            _ => Ok(()),
        }
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        match *self {
            SourceWavelet::Ricker { f0 } => ricker(t, f0),
            SourceWavelet::GaussianDeriv { t0, alpha } => gaussian_deriv(t, t0, alpha),
        }
    }

    /// Sample on the grid with periodic wrap: the quadrature FT treats the
    /// record as `T`-periodic, so any acausal part of the wavelet (the
    /// Ricker's `t < 0` half) lands at the end of the record.
    pub fn sample_periodic(&self, grid: &TimeGrid) -> Vec<f64> {
        (0..grid.m)
            .map(|n| {
                let t = grid.time(n);
                self.evaluate(t) + self.evaluate(t - grid.t_total)
            })
            .collect()
    }
}

/// The Ricker wavelet `(1 − 2π²f0²t²)·exp(−π²f0²t²)`.
pub fn ricker(t: f64, f0: f64) -> f64 {
    let a = std::f64::consts::PI * std::f64::consts::PI * f0 * f0 * t * t;
    (1.0 - 2.0 * a) * (-a).exp()
}

/// Derivative of a Gaussian, `−2α̃(t−t0)·exp(−α̃(t−t0)²)`.
pub fn gaussian_deriv(t: f64, t0: f64, alpha: f64) -> f64 {
    let s = t - t0;
    -2.0 * alpha * s * (-alpha * s * s).exp()
}

/// Analytic Fourier transform of [`gaussian_deriv`] under the
/// `∫ g(t)·e^{−i2πft} dt` convention:
/// `Ĝ(f) = 2√(π/α̃)·πf·exp(−π²f²/α̃)·[sin(2πf t0) + i·cos(2πf t0)]`.
pub fn gaussian_deriv_ft(f: f64, t0: f64, alpha: f64) -> Result<Complex64> {
    if !(alpha > 0.0) {
        return Err(Error::validation("gaussian_deriv_ft requires alpha > 0"));
    }
    let pi = std::f64::consts::PI;
    let amp = 2.0 * (pi / alpha).sqrt() * pi * f * (-pi * pi * f * f / alpha).exp();
    let phase = 2.0 * pi * f * t0;
    Ok(Complex64::new(amp * phase.sin(), amp * phase.cos()))
}

/// Rectangle-rule Fourier transform of a sampled record:
/// `û(f) = λ·Σ_n u(λn)·exp(−i2πf·λn)`.
///
/// At the grid frequencies `f_m = m/T` this coincides with `λ√M·(Fu)_m+1`
/// for the unitary DFT `F`.
pub fn quadrature_ft(samples: &[f64], grid: &TimeGrid, f: f64) -> Result<Complex64> {
    if samples.len() != grid.m {
        return Err(Error::validation(format!(
            "quadrature_ft: {} samples but grid has M = {}",
            samples.len(),
            grid.m
        )));
    }
    let lambda = grid.lambda();
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, &u) in samples.iter().enumerate() {
        let ang = -2.0 * std::f64::consts::PI * f * lambda * n as f64;
        acc += u * Complex64::from_polar(1.0, ang);
    }
    Ok(acc * lambda)
}
