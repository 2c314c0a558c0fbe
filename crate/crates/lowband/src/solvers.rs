//! Fixed-point solvers for the two recovery models.
//!
//! EL0M minimizes `Q(y) = ½‖Ky−r‖² + γ·env_{β‖·‖0}(y)` by alternating the
//! hard-threshold prox with an exact linear solve:
//!
//! ```text
//! x^{k+1} = prox_{β‖·‖0}(y^k)
//! (I + (β/γ)K*K) y^{k+1} = x^{k+1} + (β/γ)K*r
//! ```
//!
//! The linear step has a closed form because `K*K` is idempotent; an inner
//! contraction loop (`v^j = x − c·K*(Kv^{j−1} − r)`) is kept as an alternate
//! mode for cross-validation.  L1M is plain FISTA on the `ℓ1` model with unit
//! step (valid since `‖K*K‖ = 1`).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{framelet_synthesis, FrameletSystem, MeasurementOperator};
use crate::regularization::{
    objective_f, objective_g, prox_l0, soft_threshold, support_hash, support_size,
    RegParams,
};

/// How the EL0M linear step is computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum YUpdate {
    /// Exact solve via the idempotence identity (default).
    ClosedForm,
    /// Fixed-point inner loop of Eq-(4.5) form; converges linearly with
    /// factor `c = β/γ`, so it requires `c < 1`.
    InnerLoop { inner_max: usize, inner_tol: f64 },
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub params: RegParams,
    pub tol: f64,
    pub max_iter: usize,
    pub y_update: YUpdate,
    /// Warm start for `y⁰`; zeros when absent.
    pub init_y: Option<Vec<f64>>,
    /// Permit `β/γ ≥ (√5−1)/2`, outside the convergence theory.
    pub allow_inadmissible: bool,
}

impl SolverConfig {
    pub fn new(params: RegParams) -> Self {
        SolverConfig {
            params,
            tol: 1e-6,
            max_iter: 5000,
            y_update: YUpdate::ClosedForm,
            init_y: None,
            allow_inadmissible: false,
        }
    }
}

/// One row of the per-iteration trace.
#[derive(Debug, Clone, Copy)]
pub struct IterRecord {
    pub iter: usize,
    /// Objective `F(x^k, y^k)`; the `ℓ1` objective for L1M runs.
    pub f: f64,
    /// Envelope objective `Q(y^k)` (EL0M only).
    pub q: Option<f64>,
    /// Smooth part `G(x^k, y^k)` (EL0M only).
    pub g: Option<f64>,
    pub support_size: usize,
    pub support_hash: u64,
    pub rel_change: f64,
    pub fp_residual: f64,
    /// `‖x^k − x^{k−1}‖₂` (zero for the first record and for L1M runs).
    pub x_step: f64,
}

#[derive(Debug, Clone)]
pub struct SolveTrace {
    pub records: Vec<IterRecord>,
    pub converged: bool,
    pub iterations: usize,
    /// Earliest iteration from which the support hash never changes again.
    pub support_stabilized_at: usize,
}

impl SolveTrace {
    fn finish(records: Vec<IterRecord>, converged: bool) -> Self {
        let iterations = records.last().map(|r| r.iter).unwrap_or(0);
        let mut stabilized = records.last().map(|r| r.iter).unwrap_or(0);
        if let Some(last) = records.last() {
            for rec in records.iter().rev() {
                if rec.support_hash == last.support_hash && rec.support_size == last.support_size {
                    stabilized = rec.iter;
                } else {
                    break;
                }
            }
        }
        SolveTrace {
            records,
            converged,
            iterations,
            support_stabilized_at: stabilized,
        }
    }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn l2_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn check_finite(v: &[f64], what: &str) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::numerical(format!("non-finite values in {what}")));
    }
    Ok(())
}

/// One inner step `v = x − c·K*(K v_prev − r)` of the double-loop iteration.
pub fn el0m_inner_step(
    op: &MeasurementOperator,
    x: &[f64],
    v_prev: &[f64],
    c: f64,
    r: &[Complex64],
) -> Result<Vec<f64>> {
    if !(0.0 < c && c < 1.0) {
        return Err(Error::validation(
            "inner-loop mode requires c = beta/gamma in (0, 1)",
        ));
    }
    let kv = op.k_apply(v_prev)?;
    let diff: Vec<Complex64> = kv.iter().zip(r).map(|(a, b)| a - b).collect();
    let grad = op.k_adjoint(&diff)?;
    Ok(x.iter().zip(&grad).map(|(&xi, &gi)| xi - c * gi).collect())
}

/// Solve `(I + cK*K) y = x + cK*r` in the configured mode.
fn linear_step(
    op: &MeasurementOperator,
    x: &[f64],
    kstar_r: &[f64],
    c: f64,
    r: &[Complex64],
    mode: YUpdate,
    y_prev: &[f64],
) -> Result<Vec<f64>> {
    match mode {
        YUpdate::ClosedForm => {
            let b: Vec<f64> = x.iter().zip(kstar_r).map(|(&xi, &ki)| xi + c * ki).collect();
            op.normal_solve(c, &b)
        }
        YUpdate::InnerLoop { inner_max, inner_tol } => {
            let mut v = y_prev.to_vec();
            for _ in 0..inner_max {
                let next = el0m_inner_step(op, x, &v, c, r)?;
                let step = l2_diff(&next, &v);
                let scale = l2(&v).max(1.0);
                v = next;
                if step <= inner_tol * scale {
                    break;
                }
            }
            Ok(v)
        }
    }
}

/// Fixed-point residual `‖y − (prox(y) − c·K*(Ky − r))‖₂` at a given `y`.
fn fixed_point_residual(
    op: &MeasurementOperator,
    y: &[f64],
    c: f64,
    beta: f64,
    r: &[Complex64],
) -> Result<f64> {
    // Same map as `el0m_inner_step`, but without its c < 1 restriction:
    // the residual is well-defined for any c > 0 (inadmissible overrides).
    let x = prox_l0(y, beta)?;
    let ky = op.k_apply(y)?;
    let diff: Vec<Complex64> = ky.iter().zip(r).map(|(a, b)| a - b).collect();
    let grad = op.k_adjoint(&diff)?;
    let image: Vec<f64> = x.iter().zip(&grad).map(|(&xi, &gi)| xi - c * gi).collect();
    Ok(l2_diff(y, &image))
}

/// EL0M: the fixed-point proximity iteration for the Moreau-envelope model.
pub fn el0m_solve(
    op: &MeasurementOperator,
    r: &[Complex64],
    config: &SolverConfig,
) -> Result<(Vec<f64>, Vec<f64>, SolveTrace)> {
    let params = &config.params;
    if !params.solver_admissible() && !config.allow_inadmissible {
        return Err(Error::validation(format!(
            "beta/gamma = {:.6} is not < (sqrt(5)-1)/2; set the override to proceed",
            params.ratio()
        )));
    }
    if r.len() != op.range_dim() {
        return Err(Error::validation("el0m_solve: measurement length mismatch"));
    }
    if !(config.tol > 0.0) || config.max_iter == 0 {
        return Err(Error::validation("el0m_solve: tol must be > 0 and max_iter >= 1"));
    }
    let n = op.domain_dim();
    let c = params.ratio();
    let kstar_r = op.k_adjoint(r)?;

    let mut y = match &config.init_y {
        Some(y0) if y0.len() == n => y0.clone(),
        Some(_) => return Err(Error::validation("el0m_solve: warm start has wrong length")),
        None => vec![0.0; n],
    };
    let mut x = vec![0.0; n];
    let mut records = Vec::new();
    let mut converged = false;

    for k in 1..=config.max_iter {
        let fp_residual = fixed_point_residual(op, &y, c, params.beta, r)?;
        let x_next = prox_l0(&y, params.beta)?;
        let y_next = linear_step(op, &x_next, &kstar_r, c, r, config.y_update, &y)?;
        check_finite(&y_next, "EL0M iterate")?;

        let rel_change = l2_diff(&y_next, &y) / l2(&y).max(f64::EPSILON);
        let x_step = if k == 1 { 0.0 } else { l2_diff(&x_next, &x) };
        let f = objective_f(&x_next, &y_next, op, r, params)?;
        let q = crate::regularization::objective_q(&y_next, op, r, params)?;
        let g = objective_g(&x_next, &y_next, op, r, params)?;
        records.push(IterRecord {
            iter: k,
            f,
            q: Some(q),
            g: Some(g),
            support_size: support_size(&x_next),
            support_hash: support_hash(&x_next),
            rel_change,
            fp_residual,
            x_step,
        });

        x = x_next;
        y = y_next;
        if rel_change <= config.tol {
            converged = true;
            break;
        }
    }

    Ok((x, y, SolveTrace::finish(records, converged)))
}

/// L1M: FISTA on `½‖Ky−r‖² + γ‖y‖₁` with unit step and zero initialization.
pub fn l1m_solve(
    op: &MeasurementOperator,
    r: &[Complex64],
    gamma: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, SolveTrace)> {
    if !(gamma > 0.0) {
        return Err(Error::validation("l1m_solve requires gamma > 0"));
    }
    if r.len() != op.range_dim() {
        return Err(Error::validation("l1m_solve: measurement length mismatch"));
    }
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::validation("l1m_solve: tol must be > 0 and max_iter >= 1"));
    }
    let n = op.domain_dim();
    let mut y = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut t = 1.0f64;
    let mut records = Vec::new();
    let mut converged = false;

    let grad_step = |point: &[f64]| -> Result<Vec<f64>> {
        let kv = op.k_apply(point)?;
        let diff: Vec<Complex64> = kv.iter().zip(r).map(|(a, b)| a - b).collect();
        let grad = op.k_adjoint(&diff)?;
        Ok(point.iter().zip(&grad).map(|(&pi, &gi)| pi - gi).collect())
    };

    for k in 1..=max_iter {
        let y_next = soft_threshold(&grad_step(&v)?, gamma)?;
        check_finite(&y_next, "L1M iterate")?;
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let momentum = (t - 1.0) / t_next;
        let v_next: Vec<f64> = y_next
            .iter()
            .zip(&y)
            .map(|(&a, &b)| a + momentum * (a - b))
            .collect();

        let rel_change = l2_diff(&y_next, &y) / l2(&y).max(f64::EPSILON);
        let ky = op.k_apply(&y_next)?;
        let misfit: f64 = 0.5
            * ky.iter()
                .zip(r)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>();
        let objective = misfit + gamma * y_next.iter().map(|x| x.abs()).sum::<f64>();
        let fp = soft_threshold(&grad_step(&y_next)?, gamma)?;
        let fp_residual = l2_diff(&y_next, &fp);
        records.push(IterRecord {
            iter: k,
            f: objective,
            q: None,
            g: None,
            support_size: support_size(&y_next),
            support_hash: support_hash(&y_next),
            rel_change,
            fp_residual,
            x_step: 0.0,
        });

        y = y_next;
        v = v_next;
        t = t_next;
        if rel_change <= tol {
            converged = true;
            break;
        }
    }

    Ok((y, SolveTrace::finish(records, converged)))
}

/// `u = (1/λ)·W*y` — map recovered framelet coefficients back to the time
/// signal under the `v = λu` scaling of the measurement pipeline.
pub fn reconstruct_signal(
    framelet: &FrameletSystem,
    y: &[f64],
    lambda: f64,
) -> Result<Vec<f64>> {
    if !(lambda > 0.0) {
        return Err(Error::validation("reconstruct_signal requires lambda > 0"));
    }
    let v = framelet_synthesis(framelet, y)?;
    Ok(v.into_iter().map(|x| x / lambda).collect())
}

/// Assert the structural invariants every EL0M trace must satisfy: monotone
/// `F`, support jumps of at least `√(2β)`, support stabilization strictly
/// before termination on converged runs, and a small final fixed-point
/// residual.  Returns a description of the first violation.
pub fn check_el0m_trace(
    trace: &SolveTrace,
    params: &RegParams,
    tol: f64,
    y_final: &[f64],
) -> std::result::Result<(), String> {
    let tau = params.threshold();
    for pair in trace.records.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.f > a.f + 1e-12 * a.f.abs().max(1.0) {
            return Err(format!(
                "F increased at iter {}: {} -> {}",
                b.iter, a.f, b.f
            ));
        }
        if b.support_hash != a.support_hash && b.x_step < tau * (1.0 - 1e-9) {
            return Err(format!(
                "support changed at iter {} but x-step {} < sqrt(2*beta) = {}",
                b.iter, b.x_step, tau
            ));
        }
    }
    if trace.converged {
        if let Some(last) = trace.records.last() {
            if last.fp_residual > 10.0 * tol * l2(y_final).max(1.0) {
                return Err(format!(
                    "fixed-point residual {} exceeds 10*tol*scale",
                    last.fp_residual
                ));
            }
            if last.rel_change > tol {
                return Err("final step exceeds tol on a converged run".into());
            }
        }
        if trace.support_stabilized_at >= trace.iterations && trace.iterations > 1 {
            return Err(format!(
                "support did not stabilize before termination (V = {} = final iter)",
                trace.support_stabilized_at
            ));
        }
    }
    Ok(())
}
