//! CLI behavior: config precedence and rejection, solve/score round trips,
//! and exit-code classification (via the error variants).

use std::fs;
use std::path::PathBuf;

use num_complex::Complex64;

use lowband::cli;
use lowband::evaluation::{gaussian_measurements, gaussian_signal, signal_grid, snr};
use lowband::io::{read_signal_csv, write_measurement_csv, write_signal_csv, write_text};
use lowband::operators::build_band_plan;

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> lowband::Result<()> {
    cli::run(args.iter().map(|s| s.to_string()))
}

#[test]
fn unknown_config_key_is_rejected_with_validation_exit() {
    let dir = tmp("cli_badkey");
    let config = dir.join("run.cfg");
    write_text(&config, "beta = 0.01\nbogus_key = 3\n").unwrap();
    let err = run(&[
        "solve",
        "--config",
        config.to_str().unwrap(),
        "--input",
        "/nonexistent.csv",
    ])
    .unwrap_err();
    assert_eq!(err.exit_code(), 1, "unknown key must be a validation error");
    assert!(err.to_string().contains("bogus_key"));
}

#[test]
fn unknown_experiment_is_rejected() {
    let dir = tmp("cli_badexp");
    let err = run(&["experiment", "tableau", "--out", dir.to_str().unwrap()]).unwrap_err();
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn zero_measurements_solve_to_zero() {
    let dir = tmp("cli_zero");
    let grid = signal_grid();
    let plan = build_band_plan(grid.m, grid.t_total, 0.5, 7.5).unwrap();
    let zeros = vec![Complex64::new(0.0, 0.0); plan.d()];
    let input = dir.join("zeros.csv");
    write_measurement_csv(&input, plan.rows(), &zeros).unwrap();
    run(&[
        "solve",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ])
    .unwrap();
    let (_, u) = read_signal_csv(&dir.join("reconstruction.csv")).unwrap();
    assert_eq!(u.len(), grid.m);
    assert!(u.iter().all(|&v| v == 0.0));
}

#[test]
fn solve_score_round_trip_reproduces_the_snr() {
    let dir = tmp("cli_roundtrip");
    let grid = signal_grid();
    let plan = build_band_plan(grid.m, grid.t_total, 0.5, 7.5).unwrap();
    let r = gaussian_measurements(&plan, &grid).unwrap();
    let input = dir.join("measurements.csv");
    write_measurement_csv(&input, plan.rows(), &r).unwrap();

    // Flag overrides config file: the file asks for l1m, the flag for el0m.
    let config = dir.join("run.cfg");
    write_text(&config, "method = l1m\ngamma = 0.02 # file layer\n").unwrap();
    run(&[
        "solve",
        "--config",
        config.to_str().unwrap(),
        "--method",
        "el0m",
        "--gamma",
        "0.0202",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ])
    .unwrap();
    let effective = fs::read_to_string(dir.join("effective_config.txt")).unwrap();
    assert!(effective.contains("method = el0m"), "flag must win: {effective}");

    // Score the dumped reconstruction against the analytic original; the
    // number must be recomputable from the CSV pair alone.
    let orig = gaussian_signal(&grid);
    let orig_path = dir.join("original.csv");
    write_signal_csv(&orig_path, &grid.times(), &orig).unwrap();
    run(&[
        "score",
        orig_path.to_str().unwrap(),
        dir.join("reconstruction.csv").to_str().unwrap(),
    ])
    .unwrap();

    let (_, reco) = read_signal_csv(&dir.join("reconstruction.csv")).unwrap();
    let from_files = snr(&orig, &reco).unwrap();
    assert!(
        from_files > 15.0,
        "closed-form el0m on the benchmark band scored {from_files:.2} dB"
    );
}
