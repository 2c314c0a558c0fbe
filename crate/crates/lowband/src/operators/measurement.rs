//! The composite measurement operator `K = R·F·W*`.
//!
//! `K` maps real framelet coefficients (length `N`) to the observed complex
//! spectral entries (length `d`).  Its structure gives two exact identities
//! used throughout the solvers:
//!
//! - `K K* = I_d` (unitary `F`, tight `W`, distinct rows), and
//! - `K*K` is real and idempotent, so `(I + cK*K)⁻¹ = I − c/(1+c)·K*K`.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::fourier::{dft_adjoint, dft_apply, FourierSpec};
use super::framelet::{framelet_analysis, framelet_synthesis, FrameletSystem};
use super::sampling::{select, select_adjoint, SamplingPlan};

/// Hermitian-consistency residuals beyond this fraction of the input norm are
/// rejected in checked mode.
const HERMITIAN_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct MeasurementOperator {
    spec: FourierSpec,
    plan: SamplingPlan,
    framelet: FrameletSystem,
}

impl MeasurementOperator {
    pub fn new(spec: FourierSpec, plan: SamplingPlan, framelet: FrameletSystem) -> Result<Self> {
        if spec.len() != plan.signal_len() || spec.len() != framelet.signal_len() {
            return Err(Error::validation(format!(
                "inconsistent lengths: DFT M={}, plan M={}, framelet M={}",
                spec.len(),
                plan.signal_len(),
                framelet.signal_len()
            )));
        }
        Ok(MeasurementOperator {
            spec,
            plan,
            framelet,
        })
    }

    /// Convenience constructor from the grid size, plan, and level count.
    pub fn build(plan: SamplingPlan, levels: usize) -> Result<Self> {
        let m = plan.signal_len();
        Self::new(FourierSpec::new(m)?, plan, FrameletSystem::new(m, levels)?)
    }

    pub fn signal_len(&self) -> usize {
        self.spec.len()
    }

    /// Real domain dimension `N`.
    pub fn domain_dim(&self) -> usize {
        self.framelet.coeff_len()
    }

    /// Complex range dimension `d`.
    pub fn range_dim(&self) -> usize {
        self.plan.d()
    }

    pub fn plan(&self) -> &SamplingPlan {
        &self.plan
    }

    pub fn framelet(&self) -> &FrameletSystem {
        &self.framelet
    }

    pub fn fourier(&self) -> &FourierSpec {
        &self.spec
    }

    /// `K y = R·F·W*·y`.
    pub fn k_apply(&self, y: &[f64]) -> Result<Vec<Complex64>> {
        let v = framelet_synthesis(&self.framelet, y)?;
        let vc: Vec<Complex64> = v.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        select(&self.plan, &dft_apply(&self.spec, &vc)?)
    }

    /// `K* w = W·Re(F*·R*·w)` for Hermitian-consistent `w`.
    ///
    /// The imaginary part of `F*R*w` vanishes (up to roundoff) exactly when
    /// `w` respects the conjugate pairing of the plan; it is discarded here.
    pub fn k_adjoint(&self, w: &[Complex64]) -> Result<Vec<f64>> {
        let z = select_adjoint(&self.plan, w)?;
        let v = dft_adjoint(&self.spec, &z)?;
        let re: Vec<f64> = v.iter().map(|c| c.re).collect();
        framelet_analysis(&self.framelet, &re)
    }

    /// `k_adjoint` that rejects inputs violating Hermitian consistency by
    /// more than `1e-6` of their norm.
    pub fn k_adjoint_checked(&self, w: &[Complex64]) -> Result<Vec<f64>> {
        let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let residual = self.plan.hermitian_residual(w);
        if residual > HERMITIAN_CHECK_TOL * norm.max(1e-300) {
            return Err(Error::validation(format!(
                "measurement vector violates Hermitian consistency: residual {residual:.3e} vs norm {norm:.3e}"
            )));
        }
        self.k_adjoint(w)
    }

    /// `K*K b` — one round trip through the operator.
    pub fn normal_apply(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.k_adjoint(&self.k_apply(b)?)
    }

    /// Solve `(I + cK*K)x = b` exactly via `x = b − c/(1+c)·K*K b`, valid
    /// because `K*K` is idempotent.
    pub fn normal_solve(&self, c: f64, b: &[f64]) -> Result<Vec<f64>> {
        if !(c > 0.0) {
            return Err(Error::validation("normal_solve requires c > 0"));
        }
        let kk = self.normal_apply(b)?;
        let factor = c / (1.0 + c);
        Ok(b.iter().zip(&kk).map(|(&bi, &ki)| bi - factor * ki).collect())
    }
}
