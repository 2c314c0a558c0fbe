//! Unitary discrete Fourier transform.
//!
//! Entry convention: `F[m][n] = (1/√M)·exp(−i·2π·(m−1)(n−1)/M)` with 1-based
//! row/column indices, so `F` is unitary and `F*` is its inverse.  The
//! implementation runs an FFT and rescales; unit tests pin it against the
//! explicit entry formula.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Planned unitary DFT of a fixed length `M`.
#[derive(Clone)]
pub struct FourierSpec {
    m: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl FourierSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::validation("FourierSpec requires M >= 1"));
        }
        let mut planner = FftPlanner::new();
        Ok(FourierSpec {
            m,
            fwd: planner.plan_fft_forward(m),
            inv: planner.plan_fft_inverse(m),
        })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Debug for FourierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierSpec").field("m", &self.m).finish()
    }
}

fn check_len(spec: &FourierSpec, len: usize) -> Result<()> {
    if len != spec.m {
        return Err(Error::validation(format!(
            "DFT length mismatch: vector has {len} entries, spec expects {}",
            spec.m
        )));
    }
    Ok(())
}

/// `F v` under the unitary `1/√M` normalization.
pub fn dft_apply(spec: &FourierSpec, v: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(spec, v.len())?;
    let mut buf = v.to_vec();
    spec.fwd.process(&mut buf);
    let scale = 1.0 / (spec.m as f64).sqrt();
    for z in &mut buf {
        *z *= scale;
    }
    Ok(buf)
}

/// `F* z`; inverse of [`dft_apply`].
pub fn dft_adjoint(spec: &FourierSpec, z: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(spec, z.len())?;
    let mut buf = z.to_vec();
    spec.inv.process(&mut buf);
    let scale = 1.0 / (spec.m as f64).sqrt();
    for z in &mut buf {
        *z *= scale;
    }
    Ok(buf)
}
