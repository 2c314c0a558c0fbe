//! SNR scoring and seeded measurement noise.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::operators::SamplingPlan;

/// Seeded Gaussian measurement noise: standard deviation per real component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

/// `10·log₁₀(‖orig‖²/‖orig−reco‖²)` in dB; `+∞` when the error is exactly
/// zero.
pub fn snr(orig: &[f64], reco: &[f64]) -> Result<f64> {
    if orig.len() != reco.len() {
        return Err(Error::validation("snr: length mismatch"));
    }
    let signal: f64 = orig.iter().map(|x| x * x).sum();
    if signal == 0.0 {
        return Err(Error::validation("snr: zero original signal"));
    }
    let error: f64 = orig.iter().zip(reco).map(|(a, b)| (a - b) * (a - b)).sum();
    if error == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (signal / error).log10())
}

/// SNR after fitting the best least-squares amplitude `α` to the
/// reconstruction: `max_α snr(orig, α·reco)`.  Isolates waveform fidelity
/// from the absolute source-amplitude ambiguity of the modeling chain.
pub fn scaled_snr(orig: &[f64], reco: &[f64]) -> Result<f64> {
    if orig.len() != reco.len() {
        return Err(Error::validation("scaled_snr: length mismatch"));
    }
    let dot: f64 = orig.iter().zip(reco).map(|(a, b)| a * b).sum();
    let energy: f64 = reco.iter().map(|x| x * x).sum();
    if energy == 0.0 {
        return snr(orig, reco);
    }
    let alpha = dot / energy;
    let scaled: Vec<f64> = reco.iter().map(|&x| alpha * x).collect();
    snr(orig, &scaled)
}

/// Best scaled SNR over integer shifts of the reconstruction by up to
/// `max_lag` samples in either direction (samples shifted in are zero).
/// Used for seismic scoring, where finite-difference dispersion introduces a
/// small systematic phase displacement.
pub fn aligned_snr(orig: &[f64], reco: &[f64], max_lag: usize) -> Result<f64> {
    if orig.len() != reco.len() {
        return Err(Error::validation("aligned_snr: length mismatch"));
    }
    let n = orig.len() as i64;
    let mut best = f64::NEG_INFINITY;
    for lag in -(max_lag as i64)..=(max_lag as i64) {
        let shifted: Vec<f64> = (0..n)
            .map(|i| {
                let j = i - lag;
                if (0..n).contains(&j) {
                    reco[j as usize]
                } else {
                    0.0
                }
            })
            .collect();
        let s = scaled_snr(orig, &shifted)?;
        if s > best {
            best = s;
        }
    }
    Ok(best)
}

/// Add independent zero-mean Gaussian noise (std `σ` per real component) to
/// every low-half entry of `r`, then mirror conjugates so the result stays
/// Hermitian-consistent.  Deterministic given the seed; `σ = 0` returns the
/// input bit-identically.
pub fn add_noise(r: &[Complex64], plan: &SamplingPlan, spec: &NoiseSpec) -> Result<Vec<Complex64>> {
    if r.len() != plan.d() {
        return Err(Error::validation("add_noise: measurement length mismatch"));
    }
    if !(spec.sigma >= 0.0) {
        return Err(Error::validation("add_noise: sigma must be >= 0"));
    }
    let tol = 1e-8 * r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    if plan.hermitian_residual(r) > tol {
        return Err(Error::validation("add_noise: input is not Hermitian-consistent"));
    }
    if spec.sigma == 0.0 {
        return Ok(r.to_vec());
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = Normal::new(0.0, spec.sigma)
        .map_err(|e| Error::validation(format!("add_noise: bad sigma ({e})")))?;
    let mut low = Vec::new();
    for row in plan.low_half_rows() {
        let pos = plan.position_of(row).expect("low-half row is in plan");
        let dre: f64 = normal.sample(&mut rng);
        let dim: f64 = normal.sample(&mut rng);
        low.push((row, r[pos] + Complex64::new(dre, dim)));
    }
    plan.hermitian_fill(&low)
}
