//! End-to-end acceptance suite.
//!
//! Each numbered criterion prints exactly one `criterion N: PASS/FAIL` line
//! with a short factual detail; the test asserts at the end so every line is
//! printed even when something fails.  The criteria run sequentially inside
//! one `#[test]` so the per-criterion wall-clock budgets are measured on an
//! otherwise idle process.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64;

use lowband::evaluation::{
    aligned_snr, first_arrival_error, gaussian_measurements, layered_receivers, run_homogeneous,
    run_layered, run_layered_at, run_table1, run_table2, run_table3, signal_grid,
    ExperimentReport, LayeredModelKind, Scenario, SpectraMode, SEISMIC_MAX_LAG, TABLE3_SIGMAS,
    TABLE3_TRIALS, TABLE_EL0M, TABLE_FMAX,
};
use lowband::io::write_pgm;
use lowband::operators::{build_band_plan, build_band_plan_snapped, FrameletSystem, MeasurementOperator};
use lowband::regularization::RegParams;
use lowband::seismic::{
    assemble_measurements, greens_2d, greens_receiver_spectra, helmholtz_solve,
    reconstruct_seismogram, HelmholtzProblem, Method, SourceWavelet, VelocityModel,
};
use lowband::selftest::run_selftest;
use lowband::solvers::{el0m_solve, SolverConfig, YUpdate};

const SEED: u64 = 20260823;

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn out_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance")
}

struct Results {
    lines: Vec<(usize, bool, String)>,
}

impl Results {
    fn run(
        &mut self,
        n: usize,
        what: &str,
        f: impl FnOnce() -> Result<String, String>,
    ) {
        let outcome = catch_unwind(AssertUnwindSafe(f));
        let (ok, detail) = match outcome {
            Ok(Ok(detail)) => (true, detail),
            Ok(Err(detail)) => (false, detail),
            Err(panic) => {
                let msg = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".to_string());
                (false, format!("panicked: {msg}"))
            }
        };
        println!(
            "criterion {n}: {} — {what} ({detail})",
            if ok { "PASS" } else { "FAIL" }
        );
        self.lines.push((n, ok, detail));
    }
}

fn check(cond: bool, ok_msg: &mut Vec<String>, fail_msg: String) -> bool {
    if !cond {
        ok_msg.push(fail_msg);
    }
    cond
}

/// Mean SNR for (case, method), or an error string.
fn mean(report: &ExperimentReport, case: &str, method: &str) -> Result<f64, String> {
    report
        .mean_snr(case, method)
        .map_err(|e| format!("missing ({case}, {method}): {e}"))
}

#[test]
fn acceptance_criteria() {
    let mut res = Results { lines: Vec::new() };

    // ---- criteria 1 & 2: structural self-test suites --------------------
    let start = Instant::now();
    let selftest = run_selftest().expect("selftest runs");
    let selftest_secs = start.elapsed().as_secs_f64();
    res.run(1, "operator identities (W*W, KK*, K*K idempotent, normal_solve)", || {
        let suite = &selftest.suites[0];
        if suite.failed == 0 && selftest_secs < 5.0 {
            Ok(format!("{} checks, {selftest_secs:.2} s", suite.passed))
        } else {
            Err(format!("{} failures: {:?}, {selftest_secs:.2} s", suite.failed, suite.failures))
        }
    });
    res.run(2, "prox/envelope brute-force oracles", || {
        let suite = &selftest.suites[1];
        if suite.failed == 0 && selftest_secs < 5.0 {
            Ok(format!("{} checks, {selftest_secs:.2} s", suite.passed))
        } else {
            Err(format!("{} failures: {:?}", suite.failed, suite.failures))
        }
    });

    // ---- table runs shared by criteria 3, 5, 6, 7, 11 -------------------
    let start = Instant::now();
    let t2 = run_table2();
    let t2_secs = start.elapsed().as_secs_f64();

    res.run(3, "EL0M structural invariants on every Table-2 run", || {
        // The runners assert monotone F, support-jump, support stabilization
        // and the fixed-point residual on every EL0M solve; reaching a report
        // without error means every check held.
        match &t2 {
            Ok(_) if t2_secs < 30.0 => Ok(format!("asserted in-run, {t2_secs:.1} s")),
            Ok(_) => Err(format!("runtime {t2_secs:.1} s >= 30 s")),
            Err(e) => Err(format!("table2 failed: {e}")),
        }
    });

    res.run(4, "closed-form vs inner-loop y-updates agree", || {
        let grid = signal_grid();
        let mut worst = 0.0f64;
        for (idx, &f_max) in TABLE_FMAX.iter().enumerate() {
            let plan = build_band_plan(grid.m, grid.t_total, 0.5, f_max)
                .map_err(|e| e.to_string())?;
            let r = gaussian_measurements(&plan, &grid).map_err(|e| e.to_string())?;
            let recipe = &TABLE_EL0M[idx];
            let op = MeasurementOperator::build(plan, recipe.levels)
                .map_err(|e| e.to_string())?;
            let params =
                RegParams::new(recipe.beta, recipe.gamma).map_err(|e| e.to_string())?;
            let run = |y_update: YUpdate| -> Result<Vec<f64>, String> {
                let mut config = SolverConfig::new(params);
                // Tight outer tolerance: both modes either converge to far
                // below the 1e-6 comparison threshold or run the full budget
                // on matching trajectories.
                config.tol = 1e-10;
                config.max_iter = 1500;
                config.y_update = y_update;
                let (_, y, _) = el0m_solve(&op, &r, &config).map_err(|e| e.to_string())?;
                Ok(y)
            };
            let y_cf = run(YUpdate::ClosedForm)?;
            let y_il = run(YUpdate::InnerLoop { inner_max: 200, inner_tol: 1e-12 })?;
            let rel = y_cf
                .iter()
                .zip(&y_il)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
                / l2(&y_cf).max(f64::MIN_POSITIVE);
            worst = worst.max(rel);
        }
        if worst < 1e-6 {
            Ok(format!("max relative y difference {worst:.2e}"))
        } else {
            Err(format!("max relative y difference {worst:.2e} >= 1e-6"))
        }
    });

    res.run(5, "Table 2 reproduction within ±3 dB with EL0M >= L1M", || {
        let t2 = t2.as_ref().map_err(|e| format!("table2 failed: {e}"))?;
        let el0m_ref = [39.07, 33.88, 34.66, 21.26];
        let l1m_ref = [24.52, 16.05, 13.63, 13.47];
        let mut problems = Vec::new();
        let mut summary = Vec::new();
        for (idx, &f_max) in TABLE_FMAX.iter().enumerate() {
            let case = format!("fmax={f_max}");
            let e = mean(t2, &case, "el0m")?;
            let l = mean(t2, &case, "l1m")?;
            check(
                (e - el0m_ref[idx]).abs() <= 3.0,
                &mut problems,
                format!("{case}: el0m {e:.2} outside {}±3", el0m_ref[idx]),
            );
            check(
                (l - l1m_ref[idx]).abs() <= 3.0,
                &mut problems,
                format!("{case}: l1m {l:.2} outside {}±3", l1m_ref[idx]),
            );
            check(e >= l, &mut problems, format!("{case}: el0m {e:.2} < l1m {l:.2}"));
            summary.push(format!("{case}: el0m {e:.2}/l1m {l:.2}"));
        }
        check(t2_secs < 60.0, &mut problems, format!("runtime {t2_secs:.1} s >= 60 s"));
        if problems.is_empty() {
            Ok(format!("{}; {t2_secs:.1} s", summary.join(", ")))
        } else {
            Err(problems.join("; "))
        }
    });

    let start = Instant::now();
    let t1 = run_table1(SEED);
    let t1_secs = start.elapsed().as_secs_f64();
    res.run(6, "Table 1 random sampling, 5 seeded trials", || {
        let t1 = t1.as_ref().map_err(|e| format!("table1 failed: {e}"))?;
        let mut problems = Vec::new();
        let mut summary = Vec::new();
        for case in ["50%", "40%", "30%"] {
            let e = mean(t1, case, "el0m")?;
            let l = mean(t1, case, "l1m")?;
            check(e > l, &mut problems, format!("{case}: el0m {e:.2} <= l1m {l:.2}"));
            summary.push(format!("{case}: el0m {e:.2}/l1m {l:.2}"));
        }
        let e50 = mean(t1, "50%", "el0m")?;
        check(
            (e50 - 37.02).abs() <= 5.0,
            &mut problems,
            format!("50% el0m mean {e50:.2} outside 37.02±5"),
        );
        check(t1_secs < 120.0, &mut problems, format!("runtime {t1_secs:.1} s >= 120 s"));
        if problems.is_empty() {
            Ok(format!("{}; {t1_secs:.1} s", summary.join(", ")))
        } else {
            Err(problems.join("; "))
        }
    });

    let start = Instant::now();
    let t3 = run_table3(SEED, &TABLE3_SIGMAS);
    let t3_zero = run_table3(SEED, &[0.0]);
    let t3_secs = start.elapsed().as_secs_f64();
    res.run(7, "Table 3 noisy sampling with sigma=0 degeneration", || {
        let t3 = t3.as_ref().map_err(|e| format!("table3 failed: {e}"))?;
        let t3_zero = t3_zero.as_ref().map_err(|e| format!("table3 sigma=0 failed: {e}"))?;
        let t2 = t2.as_ref().map_err(|e| format!("table2 failed: {e}"))?;
        let mut problems = Vec::new();
        for &sigma in &TABLE3_SIGMAS {
            for &f_max in &TABLE_FMAX {
                let case = format!("sigma={sigma},fmax={f_max}");
                let e = mean(t3, &case, "el0m")?;
                let l = mean(t3, &case, "l1m")?;
                check(e >= l, &mut problems, format!("{case}: el0m {e:.2} < l1m {l:.2}"));
            }
        }
        // sigma = 0 must reproduce Table 2 bitwise (per matching row).
        for row2 in &t2.rows {
            let case0 = format!("sigma=0,{}", row2.case);
            for trial in 0..TABLE3_TRIALS {
                match t3_zero.rows.iter().find(|r| {
                    r.case == case0 && r.method == row2.method && r.trial == trial
                }) {
                    Some(row0) => {
                        check(
                            row0.snr_db.to_bits() == row2.snr_db.to_bits()
                                && row0.iterations == row2.iterations,
                            &mut problems,
                            format!("{case0} trial {trial} differs from table2"),
                        );
                    }
                    None => problems.push(format!("{case0} trial {trial} missing")),
                }
            }
        }
        check(t3_secs < 180.0, &mut problems, format!("runtime {t3_secs:.1} s >= 180 s"));
        if problems.is_empty() {
            Ok(format!(
                "el0m >= l1m for all {} (sigma, fmax) pairs, sigma=0 bitwise, {t3_secs:.1} s",
                TABLE3_SIGMAS.len() * TABLE_FMAX.len()
            ))
        } else {
            Err(problems.join("; "))
        }
    });

    res.run(8, "Helmholtz field vs Hankel Green's oracle", || {
        let start = Instant::now();
        let (nx, nz, h, v, f) = (201usize, 201usize, 10.0, 1500.0, 10.0);
        let src = (1000.0, 1000.0);
        let model = VelocityModel::homogeneous(nx, nz, h, v).map_err(|e| e.to_string())?;
        let problem = HelmholtzProblem::new(model, f, src); // PML width 20 default
        let field = helmholtz_solve(&problem).map_err(|e| e.to_string())?;
        let (mut max_rel, mut max_phase, mut count) = (0.0f64, 0.0f64, 0usize);
        for j in 0..nz {
            for i in 0..nx {
                let (x, z) = (i as f64 * h, j as f64 * h);
                let edge = x
                    .min(z)
                    .min((nx - 1) as f64 * h - x)
                    .min((nz - 1) as f64 * h - z);
                let r = ((x - src.0).powi(2) + (z - src.1).powi(2)).sqrt();
                if edge < 200.0 || r < 300.0 {
                    continue;
                }
                let got = field.at_interior(i, j);
                let want = greens_2d(f, v, r, Complex64::new(1.0, 0.0))
                    .map_err(|e| e.to_string())?;
                max_rel = max_rel.max((got - want).norm() / want.norm());
                max_phase = max_phase.max((got / want).arg().abs());
                count += 1;
            }
        }
        let secs = start.elapsed().as_secs_f64();
        if max_rel <= 0.10 && max_phase <= 0.1 && secs < 30.0 && count > 0 {
            Ok(format!(
                "max |rel| {max_rel:.3}, max phase {max_phase:.4} rad over {count} nodes, {secs:.1} s"
            ))
        } else {
            Err(format!(
                "max |rel| {max_rel:.3} (limit 0.10), max phase {max_phase:.4} (limit 0.1), {secs:.1} s"
            ))
        }
    });

    res.run(9, "homogeneous Ricker FD pipeline, band [1, 42] Hz", || {
        let start = Instant::now();
        let fd = run_homogeneous(Scenario::Ricker, 42.0, SpectraMode::Fd)
            .map_err(|e| e.to_string())?;
        let fast = run_homogeneous(Scenario::Ricker, 42.0, SpectraMode::Fast)
            .map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        let get = |run: &lowband::evaluation::HomogeneousRun, m: &str| {
            mean(&run.report, "ricker,fmax=42", m)
        };
        let (e, l, i) = (get(&fd, "el0m")?, get(&fd, "l1m")?, get(&fd, "idft")?);
        let mut problems = Vec::new();
        check(e > i, &mut problems, format!("aligned el0m {e:.2} <= idft {i:.2}"));
        check(e >= l, &mut problems, format!("aligned el0m {e:.2} < l1m {l:.2}"));
        let mut cross_min = f64::INFINITY;
        for ((name_a, ta), (name_b, tb)) in fast.traces.iter().zip(&fd.traces) {
            assert_eq!(name_a, name_b);
            let cross = lowband::evaluation::snr(ta, tb).map_err(|e| e.to_string())?;
            cross_min = cross_min.min(cross);
            check(
                cross >= 20.0,
                &mut problems,
                format!("fast/FD cross-check {name_a}: {cross:.1} dB < 20 dB"),
            );
        }
        check(secs < 300.0, &mut problems, format!("runtime {secs:.1} s >= 300 s"));
        if problems.is_empty() {
            Ok(format!(
                "aligned el0m {e:.2} > idft {i:.2}, >= l1m {l:.2}; cross-mode >= {cross_min:.1} dB; {secs:.1} s"
            ))
        } else {
            Err(problems.join("; "))
        }
    });

    res.run(10, "layered shot record, band [1, 30] Hz", || {
        let start = Instant::now();
        let dir = out_dir();
        let layered = run_layered(30.0, LayeredModelKind::Layered).map_err(|e| e.to_string())?;
        let mut problems = Vec::new();
        check(
            layered.records.len() == 3,
            &mut problems,
            format!("{} records instead of 3", layered.records.len()),
        );
        for (method, record) in &layered.records {
            let path = dir.join(format!("record_{method}.pgm"));
            write_pgm(&path, record.grid.m, record.receivers.len(), &record.data)
                .map_err(|e| e.to_string())?;
            check(path.is_file(), &mut problems, format!("missing {}", path.display()));
        }

        // Degenerate (zero-contrast) model, reconstructed at 5 probe
        // receivers only: the Helmholtz fields cover the full grid either
        // way, and these probes are all the checks below read.
        let v_deg = 2000.0;
        let all = layered_receivers();
        let probes: Vec<(f64, f64)> = [40usize, 80, 100, 150, 200]
            .iter()
            .map(|&j| all[j])
            .collect();
        let deg = run_layered_at(30.0, LayeredModelKind::Degenerate { v: v_deg }, probes.clone())
            .map_err(|e| e.to_string())?;
        let wavelet = SourceWavelet::Ricker { f0: 25.0 };
        let src = (0.0, 1000.0);
        let grid = deg.grid;
        let plan = build_band_plan_snapped(grid.m, grid.t_total, 1.0, 30.0)
            .map_err(|e| e.to_string())?;
        let framelet = FrameletSystem::new(grid.m, 3).map_err(|e| e.to_string())?;
        let (_, deg_idft) = deg
            .records
            .iter()
            .find(|(m, _)| m == "idft")
            .ok_or("no idft record")?;
        let (_, deg_el0m) = deg
            .records
            .iter()
            .find(|(m, _)| m == "el0m")
            .ok_or("no el0m record")?;
        let mut hom_match_min = f64::INFINITY;
        let mut worst_arrival = 0i64;
        for (j, &rcv) in probes.iter().enumerate() {
            // Degenerate FD record vs the homogeneous (analytic Green's)
            // pipeline with the same method — the zero-contrast model must
            // reproduce the homogeneous result.
            let spectra = greens_receiver_spectra(v_deg, &wavelet, src, rcv, &grid, &plan)
                .map_err(|e| e.to_string())?;
            let r = assemble_measurements(&spectra, &plan, &grid).map_err(|e| e.to_string())?;
            let (hom, _) = reconstruct_seismogram(&r, &plan, &grid, &framelet, &Method::Idft)
                .map_err(|e| e.to_string())?;
            let match_snr = aligned_snr(&hom.samples, &deg_idft.trace(j), SEISMIC_MAX_LAG)
                .map_err(|e| e.to_string())?;
            hom_match_min = hom_match_min.min(match_snr);
            check(
                match_snr >= 15.0,
                &mut problems,
                format!("receiver {rcv:?}: degenerate/homogeneous match {match_snr:.1} dB < 15"),
            );
            // First arrival against the geometric traveltime oracle.
            let err = first_arrival_error(&deg_el0m.trace(j), v_deg, &wavelet, src, rcv, &grid)
                .map_err(|e| e.to_string())?;
            worst_arrival = worst_arrival.max(err.abs());
            check(
                err.abs() <= 3,
                &mut problems,
                format!("receiver {rcv:?}: first-arrival error {err} samples"),
            );
        }
        let secs = start.elapsed().as_secs_f64();
        check(secs < 600.0, &mut problems, format!("runtime {secs:.1} s >= 600 s"));
        if problems.is_empty() {
            Ok(format!(
                "3 records + PGMs; degenerate/homogeneous match >= {hom_match_min:.1} dB; \
                 worst first-arrival error {worst_arrival} samples; {secs:.1} s"
            ))
        } else {
            Err(problems.join("; "))
        }
    });

    res.run(11, "determinism: tables rerun byte-identical", || {
        let t2 = t2.as_ref().map_err(|e| format!("table2 failed: {e}"))?;
        let t1 = t1.as_ref().map_err(|e| format!("table1 failed: {e}"))?;
        let t3 = t3.as_ref().map_err(|e| format!("table3 failed: {e}"))?;
        let t2b = run_table2().map_err(|e| e.to_string())?;
        let t1b = run_table1(SEED).map_err(|e| e.to_string())?;
        let t3b = run_table3(SEED, &TABLE3_SIGMAS).map_err(|e| e.to_string())?;
        let mut problems = Vec::new();
        // wall_ms is the one timing column; the masked CSV blanks it and
        // nothing else, so byte equality covers every reported quantity.
        check(t2.to_csv_masked() == t2b.to_csv_masked(), &mut problems, "table2 rerun differs".into());
        check(t1.to_csv_masked() == t1b.to_csv_masked(), &mut problems, "table1 rerun differs".into());
        check(t3.to_csv_masked() == t3b.to_csv_masked(), &mut problems, "table3 rerun differs".into());
        if problems.is_empty() {
            Ok("table1/2/3 reruns byte-identical (timing column masked)".into())
        } else {
            Err(problems.join("; "))
        }
    });

    let failed: Vec<usize> = res
        .lines
        .iter()
        .filter(|(_, ok, _)| !ok)
        .map(|(n, _, _)| *n)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
