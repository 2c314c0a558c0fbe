//! Undecimated piecewise-linear spline tight framelet.
//!
//! Three 3-tap filters — lowpass `[1/4, 1/2, 1/4]`, bandpass
//! `[√2/4, 0, −√2/4]`, highpass `[−1/4, 1/2, −1/4]` — applied with periodic
//! boundary extension and "à trous" upsampling (filter taps spaced `2^{ℓ−1}`
//! apart at level `ℓ`).  The squared filter symbols sum to one, so with the
//! periodic extension the analysis operator `W` satisfies `W*W = I` exactly:
//! analysis is an isometry and synthesis (its adjoint) inverts it.
//!
//! Coefficient layout: the final lowpass band first, then for each level
//! `ℓ = 1..L` the bandpass and highpass detail bands.  Total length
//! `N = (2L+1)·M`.

use crate::error::{Error, Result};

const LOWPASS: [f64; 3] = [0.25, 0.5, 0.25];
const BANDPASS: [f64; 3] = [std::f64::consts::FRAC_1_SQRT_2 / 2.0, 0.0, -std::f64::consts::FRAC_1_SQRT_2 / 2.0];
const HIGHPASS: [f64; 3] = [-0.25, 0.5, -0.25];

/// `L`-level undecimated tight-frame transform for signals of length `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameletSystem {
    m: usize,
    levels: usize,
    filters: [[f64; 3]; 3],
}

impl FrameletSystem {
    pub fn new(m: usize, levels: usize) -> Result<Self> {
        Self::with_filters(m, levels, [LOWPASS, BANDPASS, HIGHPASS])
    }

    /// Construction with explicit filters.  Exists for fault-injection in the
    /// self test (a corrupted filter must break the operator identities); the
    /// standard constructor always uses the spline filters.
    pub fn with_filters(m: usize, levels: usize, filters: [[f64; 3]; 3]) -> Result<Self> {
        if m < 3 {
            return Err(Error::validation("framelet requires M >= 3 (filter length)"));
        }
        if levels == 0 {
            return Err(Error::validation("framelet requires at least one level"));
        }
        Ok(FrameletSystem { m, levels, filters })
    }

    /// Map the paper-style redundancy factor `l` (N = l·M) to a level count:
    /// `L = round((l−1)/2)`, the nearest representable `ρ = 2L+1`.
    pub fn levels_for_redundancy(l: usize) -> usize {
        (l.max(2) - 1).div_ceil(2)
    }

    pub fn signal_len(&self) -> usize {
        self.m
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Redundancy `ρ = 2L+1`.
    pub fn redundancy(&self) -> usize {
        2 * self.levels + 1
    }

    /// Coefficient length `N = ρ·M`.
    pub fn coeff_len(&self) -> usize {
        self.redundancy() * self.m
    }
}

/// Periodic correlation with a 3-tap filter whose taps are `step` apart:
/// `out[i] = h0·x[i−step] + h1·x[i] + h2·x[i+step]` (indices mod M).
fn atrous_correlate(x: &[f64], h: &[f64; 3], step: usize) -> Vec<f64> {
    let m = x.len();
    let s = step % m;
    (0..m)
        .map(|i| {
            let prev = (i + m - s) % m;
            let next = (i + s) % m;
            h[0] * x[prev] + h[1] * x[i] + h[2] * x[next]
        })
        .collect()
}

/// Adjoint of [`atrous_correlate`]: correlation with the reversed filter.
fn atrous_correlate_adjoint(y: &[f64], h: &[f64; 3], step: usize) -> Vec<f64> {
    let flipped = [h[2], h[1], h[0]];
    atrous_correlate(y, &flipped, step)
}

/// `W v`: stacked framelet coefficients of a length-`M` signal.
pub fn framelet_analysis(sys: &FrameletSystem, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != sys.m {
        return Err(Error::validation(format!(
            "framelet_analysis: length {} != M = {}",
            v.len(),
            sys.m
        )));
    }
    let [low, band, high] = &sys.filters;
    let mut details = Vec::with_capacity(2 * sys.levels);
    let mut approx = v.to_vec();
    for level in 0..sys.levels {
        let step = 1usize << level;
        details.push(atrous_correlate(&approx, band, step));
        details.push(atrous_correlate(&approx, high, step));
        approx = atrous_correlate(&approx, low, step);
    }
    let mut out = Vec::with_capacity(sys.coeff_len());
    out.extend_from_slice(&approx);
    for d in details {
        out.extend_from_slice(&d);
    }
    Ok(out)
}

/// `W* y`: adjoint of analysis; inverts it because the frame is tight.
pub fn framelet_synthesis(sys: &FrameletSystem, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != sys.coeff_len() {
        return Err(Error::validation(format!(
            "framelet_synthesis: length {} != N = {}",
            y.len(),
            sys.coeff_len()
        )));
    }
    let [low, band, high] = &sys.filters;
    let m = sys.m;
    let mut approx = y[..m].to_vec();
    // Walk levels from coarsest back to finest, folding each detail pair in.
    for level in (0..sys.levels).rev() {
        let step = 1usize << level;
        let band_coeffs = &y[(1 + 2 * level) * m..(2 + 2 * level) * m];
        let high_coeffs = &y[(2 + 2 * level) * m..(3 + 2 * level) * m];
        let mut v = atrous_correlate_adjoint(&approx, low, step);
        let vb = atrous_correlate_adjoint(band_coeffs, band, step);
        let vh = atrous_correlate_adjoint(high_coeffs, high, step);
        for i in 0..m {
            v[i] += vb[i] + vh[i];
        }
        approx = v;
    }
    Ok(approx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_signal(m: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..m).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn constant_signal_has_zero_details() {
        let sys = FrameletSystem::new(8, 1).unwrap();
        let v = vec![3.5; 8];
        let y = framelet_analysis(&sys, &v).unwrap();
        for (i, &c) in y.iter().enumerate() {
            if i < 8 {
                assert!((c - 3.5).abs() < 1e-14);
            } else {
                assert!(c.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn analysis_is_isometry() {
        for (m, levels) in [(8, 1), (129, 1), (129, 2), (168, 3)] {
            let sys = FrameletSystem::new(m, levels).unwrap();
            let v = random_signal(m, (m + levels) as u64);
            let y = framelet_analysis(&sys, &v).unwrap();
            let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let ny: f64 = y.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((nv - ny).abs() <= 1e-10 * nv, "M={m} L={levels}");
        }
    }

    #[test]
    fn perfect_reconstruction() {
        for (m, levels) in [(8, 1), (32, 2), (129, 2), (280, 1)] {
            let sys = FrameletSystem::new(m, levels).unwrap();
            for trial in 0..20 {
                let v = random_signal(m, trial);
                let back = framelet_synthesis(&sys, &framelet_analysis(&sys, &v).unwrap()).unwrap();
                let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                let err: f64 = v
                    .iter()
                    .zip(&back)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                assert!(err <= 1e-10 * nv, "M={m} L={levels}");
            }
        }
    }

    #[test]
    fn adjoint_inner_product_identity() {
        let sys = FrameletSystem::new(16, 2).unwrap();
        for trial in 0..10 {
            let v = random_signal(16, 100 + trial);
            let y = random_signal(sys.coeff_len(), 200 + trial);
            let wv = framelet_analysis(&sys, &v).unwrap();
            let wty = framelet_synthesis(&sys, &y).unwrap();
            let lhs: f64 = wv.iter().zip(&y).map(|(a, b)| a * b).sum();
            let rhs: f64 = v.iter().zip(&wty).map(|(a, b)| a * b).sum();
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn redundancy_mapping() {
        assert_eq!(FrameletSystem::levels_for_redundancy(3), 1);
        assert_eq!(FrameletSystem::levels_for_redundancy(4), 2);
        assert_eq!(FrameletSystem::levels_for_redundancy(5), 2);
        assert_eq!(FrameletSystem::levels_for_redundancy(7), 3);
    }

    #[test]
    fn zero_synthesizes_to_zero() {
        let sys = FrameletSystem::new(8, 1).unwrap();
        let out = framelet_synthesis(&sys, &vec![0.0; sys.coeff_len()]).unwrap();
        assert!(out.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rejects_short_signals_and_bad_lengths() {
        assert!(FrameletSystem::new(2, 1).is_err());
        let sys = FrameletSystem::new(8, 1).unwrap();
        assert!(framelet_analysis(&sys, &[0.0; 7]).is_err());
        assert!(framelet_synthesis(&sys, &[0.0; 23]).is_err());
    }
}
