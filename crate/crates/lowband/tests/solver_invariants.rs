//! Solver-level invariants beyond the per-module unit tests: the descent
//! and support-structure contract of the EL0M fixed-point iteration, the
//! admissibility guard, and degenerate inputs.

use num_complex::Complex64;

use lowband::evaluation::{gaussian_measurements, signal_grid};
use lowband::operators::{build_band_plan, MeasurementOperator};
use lowband::regularization::RegParams;
use lowband::solvers::{check_el0m_trace, el0m_solve, l1m_solve, SolverConfig, YUpdate};

fn benchmark_problem() -> (MeasurementOperator, Vec<Complex64>) {
    let grid = signal_grid();
    let plan = build_band_plan(grid.m, grid.t_total, 0.5, 7.5).unwrap();
    let r = gaussian_measurements(&plan, &grid).unwrap();
    (MeasurementOperator::build(plan, 3).unwrap(), r)
}

#[test]
fn el0m_trace_invariants_hold_in_both_modes() {
    let (op, r) = benchmark_problem();
    for y_update in [
        YUpdate::ClosedForm,
        YUpdate::InnerLoop { inner_max: 3, inner_tol: 0.0 },
        YUpdate::InnerLoop { inner_max: 100, inner_tol: 1e-12 },
    ] {
        let mut config = SolverConfig::new(RegParams::new(0.01, 0.0202).unwrap());
        config.max_iter = 3000;
        config.y_update = y_update;
        let (x, y, trace) = el0m_solve(&op, &r, &config).unwrap();
        assert!(x.iter().all(|v| v.is_finite()));
        // Monotone objective, support-change jumps >= sqrt(2 beta), support
        // stabilization, and the fixed-point residual bound.
        check_el0m_trace(&trace, &config.params, config.tol, &y).unwrap();
        // Hard-threshold structure: every nonzero of x clears the threshold.
        let tau = config.params.threshold();
        for &xi in &x {
            assert!(xi == 0.0 || xi.abs() > tau - 1e-12);
        }
    }
}

#[test]
fn inadmissible_ratio_is_rejected_without_override() {
    let (op, r) = benchmark_problem();
    // beta/gamma = 0.8 > (sqrt(5)-1)/2: outside the convergence theory.
    let params = RegParams::new(0.8, 1.0).unwrap();
    assert!(!params.solver_admissible());
    let config = SolverConfig::new(params);
    assert!(el0m_solve(&op, &r, &config).is_err());

    let mut permissive = SolverConfig::new(params);
    permissive.allow_inadmissible = true;
    permissive.max_iter = 50;
    el0m_solve(&op, &r, &permissive).unwrap();
}

#[test]
fn zero_measurements_give_zero_solutions() {
    let (op, r) = benchmark_problem();
    let zeros = vec![Complex64::new(0.0, 0.0); r.len()];
    let config = SolverConfig::new(RegParams::new(0.01, 0.0202).unwrap());
    let (x, y, trace) = el0m_solve(&op, &zeros, &config).unwrap();
    assert!(trace.converged);
    assert!(x.iter().all(|&v| v == 0.0));
    assert!(y.iter().all(|&v| v == 0.0));

    let (y, trace) = l1m_solve(&op, &zeros, 0.02, 1e-6, 100).unwrap();
    assert!(trace.converged);
    assert!(y.iter().all(|&v| v == 0.0));
}

#[test]
fn l1m_descends_and_converges_on_the_benchmark() {
    let (op, r) = benchmark_problem();
    let (_, trace) = l1m_solve(&op, &r, 0.02, 1e-6, 20_000).unwrap();
    assert!(trace.converged, "FISTA should converge within the budget");
    let first = trace.records.first().unwrap().f;
    let last = trace.records.last().unwrap().f;
    // FISTA is not monotone step to step, but the final objective must be
    // far below the zero-initialized start.
    assert!(last < first, "objective went from {first} to {last}");
}
