//! `ℓ0` proximity operator, Moreau envelope, soft thresholding, and the
//! objective functions tracked by the solvers.
//!
//! The prox of `β‖·‖0` acts componentwise: a coordinate survives exactly when
//! it exceeds the hard threshold `√(2β)`, and the tie `|z| = √(2β)` resolves
//! to zero.  Because iterates therefore carry exact zeros, `‖x‖0` counts
//! nonzeros with no epsilon.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::MeasurementOperator;

/// Regularization parameters: envelope index `β` and weight `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegParams {
    pub beta: f64,
    pub gamma: f64,
}

impl RegParams {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta > 0.0) || !(gamma > 0.0) {
            return Err(Error::validation("RegParams requires beta > 0 and gamma > 0"));
        }
        Ok(RegParams { beta, gamma })
    }

    /// Hard threshold `τ = √(2β)`.
    pub fn threshold(&self) -> f64 {
        (2.0 * self.beta).sqrt()
    }

    /// Smoothness constant `L = 1 + β/γ`.
    pub fn l_smooth(&self) -> f64 {
        1.0 + self.beta / self.gamma
    }

    /// Ratio `c = β/γ` appearing in the fixed-point iteration.
    pub fn ratio(&self) -> f64 {
        self.beta / self.gamma
    }

    /// Whether the convergence theory applies: `β/γ < (√5−1)/2`.
    pub fn solver_admissible(&self) -> bool {
        self.ratio() < (5f64.sqrt() - 1.0) / 2.0
    }
}

/// Scalar prox of `β‖·‖0`: `z` when `|z| > √(2β)`, else 0 (ties to 0).
pub fn prox_l0_scalar(z: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::validation("prox_l0 requires beta > 0"));
    }
    Ok(if z.abs() > (2.0 * beta).sqrt() { z } else { 0.0 })
}

/// Componentwise hard threshold at `√(2β)`.
pub fn prox_l0(z: &[f64], beta: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0) {
        return Err(Error::validation("prox_l0 requires beta > 0"));
    }
    let tau = (2.0 * beta).sqrt();
    Ok(z.iter().map(|&zi| if zi.abs() > tau { zi } else { 0.0 }).collect())
}

/// Moreau envelope of `‖·‖0` with index `β`: `Σ_i φ(x_i)` with
/// `φ(x) = 1` if `|x| ≥ √(2β)`, else `x²/(2β)`.
pub fn env_l0(x: &[f64], beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::validation("env_l0 requires beta > 0"));
    }
    let tau = (2.0 * beta).sqrt();
    Ok(x.iter()
        .map(|&xi| if xi.abs() >= tau { 1.0 } else { xi * xi / (2.0 * beta) })
        .sum())
}

/// Componentwise soft threshold `sign(z)·max(|z|−γ, 0)`.
pub fn soft_threshold(z: &[f64], gamma: f64) -> Result<Vec<f64>> {
    if !(gamma > 0.0) {
        return Err(Error::validation("soft_threshold requires gamma > 0"));
    }
    Ok(z.iter()
        .map(|&zi| zi.signum() * (zi.abs() - gamma).max(0.0))
        .collect())
}

/// Exact nonzero count.
pub fn support_size(x: &[f64]) -> usize {
    x.iter().filter(|&&xi| xi != 0.0).count()
}

/// Deterministic hash of the support set (FNV-1a over nonzero indices), used
/// to detect support changes across iterations.
pub fn support_hash(x: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for (i, &xi) in x.iter().enumerate() {
        if xi != 0.0 {
            h ^= i as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

fn data_misfit(op: &MeasurementOperator, y: &[f64], r: &[Complex64]) -> Result<f64> {
    if r.len() != op.range_dim() {
        return Err(Error::validation("objective: measurement length mismatch"));
    }
    let ky = op.k_apply(y)?;
    Ok(0.5
        * ky.iter()
            .zip(r)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>())
}

/// `F(x, y) = ½‖Ky−r‖² + (γ/2β)‖x−y‖² + γ‖x‖0`.
pub fn objective_f(
    x: &[f64],
    y: &[f64],
    op: &MeasurementOperator,
    r: &[Complex64],
    params: &RegParams,
) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::validation("objective_F: x and y lengths differ"));
    }
    let coupling: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(data_misfit(op, y, r)?
        + params.gamma / (2.0 * params.beta) * coupling
        + params.gamma * support_size(x) as f64)
}

/// `Q(y) = ½‖Ky−r‖² + γ·env_{β‖·‖0}(y)`.
pub fn objective_q(
    y: &[f64],
    op: &MeasurementOperator,
    r: &[Complex64],
    params: &RegParams,
) -> Result<f64> {
    Ok(data_misfit(op, y, r)? + params.gamma * env_l0(y, params.beta)?)
}

/// `G(x, y) = F(x, y) − γ‖x‖0` — the smooth part of `F`.
pub fn objective_g(
    x: &[f64],
    y: &[f64],
    op: &MeasurementOperator,
    r: &[Complex64],
    params: &RegParams,
) -> Result<f64> {
    let coupling: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(data_misfit(op, y, r)? + params.gamma / (2.0 * params.beta) * coupling)
}

/// `E(y) = (L/2)‖Ky−r‖²` with `L = 1 + β/γ`.
pub fn objective_e(
    y: &[f64],
    op: &MeasurementOperator,
    r: &[Complex64],
    params: &RegParams,
) -> Result<f64> {
    Ok(params.l_smooth() * data_misfit(op, y, r)?)
}
