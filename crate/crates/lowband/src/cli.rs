//! Command-line front end: configuration parsing, dispatch, file emission.
//!
//! Commands: `selftest | solve | score | experiment <name> | helmholtz`.
//! Parameters come from three layers with increasing precedence: built-in
//! defaults, a `key = value` config file (`--config`), and command-line
//! flags.  Unknown config keys are rejected.  Every command that writes
//! files also dumps the effective configuration next to its outputs so a
//! run can be reproduced from the artifacts alone.
//!
//! Exit codes: 0 success, 1 validation failure, 2 numerical failure,
//! 3 I/O error (see [`crate::Error::exit_code`]).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evaluation::{
    aligned_snr, run_homogeneous, run_layered, run_table1, run_table2, run_table3, scaled_snr,
    snr, ExperimentReport, LayeredModelKind, Scenario, SpectraMode, SEISMIC_MAX_LAG,
    TABLE3_SIGMAS,
};
use crate::io::{
    fmt_f64, read_measurement_csv, read_signal_csv, write_grid_csv, write_pgm, write_signal_csv,
    write_svg_overlay, write_text, write_trace_csv,
};
use crate::operators::{FrameletSystem, MeasurementOperator, SamplingPlan};
use crate::regularization::RegParams;
use crate::seismic::{
    greens_2d, helmholtz_solve, HelmholtzProblem, ShotRecord, TimeGrid, VelocityModel,
};
use crate::selftest::{run_selftest_with, CORRUPTED_FILTERS};
use crate::solvers::{el0m_solve, l1m_solve, reconstruct_signal, SolverConfig};

#[derive(Parser)]
#[command(
    name = "lowband",
    version,
    about = "Sparse recovery of time signals from incomplete Fourier data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in operator-identity and prox-oracle verification suites.
    Selftest {
        /// Inject a sign error into a framelet filter; the suite must then
        /// fail (demonstrates the checks have teeth).
        #[arg(long)]
        corrupt_filter: bool,
    },
    /// Reconstruct a signal from a measurement CSV (columns: row,re,im).
    Solve(ParamArgs),
    /// Score a reconstruction CSV against an original CSV (both: t,u).
    Score {
        /// Original signal CSV.
        original: PathBuf,
        /// Reconstruction CSV.
        reconstruction: PathBuf,
        /// Also report the best-integer-lag aligned SNR up to this lag.
        #[arg(long, default_value_t = SEISMIC_MAX_LAG)]
        max_lag: usize,
    },
    /// Run a named experiment and write its report and figures.
    Experiment {
        /// One of: table1, table2, table3, homogeneous-ricker,
        /// homogeneous-gaussian, layered.
        name: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Solve one Helmholtz problem and dump the field (CSV grids + PGM).
    Helmholtz(ParamArgs),
}

/// Flags mirroring the RunConfig keys (`--key value`).
#[derive(Args, Clone, Debug, Default)]
struct ParamArgs {
    /// Config file with `key = value` lines ('#' comments allowed).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Framelet decomposition levels (alias: -l in config files).
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    fmin: Option<f64>,
    #[arg(long)]
    fmax: Option<f64>,
    /// Signal duration T in seconds.
    #[arg(long = "T")]
    t_total: Option<f64>,
    /// Number of time samples M.
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Noise level for table3 (restricts the run to one sigma).
    #[arg(long)]
    sigma: Option<f64>,
    /// Reconstruction method: el0m | l1m | idft (where applicable).
    #[arg(long)]
    method: Option<String>,
    /// Spectra source for seismic experiments: fast | fd.
    #[arg(long)]
    mode: Option<String>,
    /// Input file (measurement CSV for `solve`).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also emit an SVG figure from `solve`.
    #[arg(long)]
    svg: bool,
    /// Medium velocity (helmholtz).
    #[arg(long)]
    velocity: Option<f64>,
    /// Frequency in Hz (helmholtz).
    #[arg(long)]
    freq: Option<f64>,
    /// Grid spacing in meters (helmholtz).
    #[arg(long)]
    h: Option<f64>,
    /// Interior grid width in nodes (helmholtz).
    #[arg(long)]
    nx: Option<usize>,
    /// Interior grid depth in nodes (helmholtz).
    #[arg(long)]
    nz: Option<usize>,
    /// PML collar width in cells (helmholtz).
    #[arg(long)]
    pml: Option<usize>,
    /// Source x position in meters (helmholtz).
    #[arg(long)]
    sx: Option<f64>,
    /// Source z position in meters (helmholtz).
    #[arg(long)]
    sz: Option<f64>,
}

const KNOWN_KEYS: &[&str] = &[
    "beta", "gamma", "tol", "max_iter", "levels", "l", "fmin", "fmax", "T", "M", "seed", "sigma",
    "method", "mode", "input", "out", "velocity", "freq", "h", "nx", "nz", "pml", "sx", "sz",
];

/// Resolved key → value map (defaults overlaid by file overlaid by flags).
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    entries: BTreeMap<String, String>,
}

impl RunConfig {
    fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::validation(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            let key = if key == "l" { "levels" } else { key };
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::validation(format!(
                    "{}:{}: unknown config key `{key}`",
                    path.display(),
                    lineno + 1
                )));
            }
            self.set(key, value.trim());
        }
        Ok(())
    }

    fn merge_flags(&mut self, args: &ParamArgs) {
        macro_rules! overlay {
            ($field:ident, $key:expr) => {
                if let Some(v) = &args.$field {
                    self.set($key, v.to_string());
                }
            };
        }
        overlay!(beta, "beta");
        overlay!(gamma, "gamma");
        overlay!(tol, "tol");
        overlay!(max_iter, "max_iter");
        overlay!(levels, "levels");
        overlay!(fmin, "fmin");
        overlay!(fmax, "fmax");
        overlay!(t_total, "T");
        overlay!(m, "M");
        overlay!(seed, "seed");
        overlay!(sigma, "sigma");
        overlay!(method, "method");
        overlay!(mode, "mode");
        overlay!(velocity, "velocity");
        overlay!(freq, "freq");
        overlay!(h, "h");
        overlay!(nx, "nx");
        overlay!(nz, "nz");
        overlay!(pml, "pml");
        overlay!(sx, "sx");
        overlay!(sz, "sz");
        if let Some(v) = &args.input {
            self.set("input", v.display().to_string());
        }
        if let Some(v) = &args.out {
            self.set("out", v.display().to_string());
        }
    }

    /// Build the effective config: defaults ← config file ← flags.
    fn resolve(defaults: &[(&str, &str)], args: &ParamArgs) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for &(k, v) in defaults {
            cfg.set(k, v);
        }
        if let Some(path) = &args.config {
            cfg.merge_file(path)?;
        }
        cfg.merge_flags(args);
        cfg.validate_types()?;
        Ok(cfg)
    }

    /// Parse-check every populated value so bad input fails before dispatch.
    fn validate_types(&self) -> Result<()> {
        for key in ["beta", "gamma", "tol", "fmin", "fmax", "T", "sigma", "velocity", "freq",
            "h", "sx", "sz"]
        {
            if self.entries.contains_key(key) {
                self.get_f64(key)?;
            }
        }
        for key in ["max_iter", "levels", "M", "nx", "nz", "pml"] {
            if self.entries.contains_key(key) {
                self.get_usize(key)?;
            }
        }
        if self.entries.contains_key("seed") {
            self.get_u64("seed")?;
        }
        if let Some(mode) = self.entries.get("mode") {
            if mode != "fast" && mode != "fd" {
                return Err(Error::validation(format!(
                    "mode must be `fast` or `fd`, got `{mode}`"
                )));
            }
        }
        Ok(())
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.entries
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::validation(format!("missing required parameter `{key}`")))
    }

    fn get_f64(&self, key: &str) -> Result<f64> {
        self.require(key)?
            .parse()
            .map_err(|_| Error::validation(format!("parameter `{key}` must be a number")))
    }

    fn get_usize(&self, key: &str) -> Result<usize> {
        self.require(key)?
            .parse()
            .map_err(|_| Error::validation(format!("parameter `{key}` must be a nonnegative integer")))
    }

    fn get_u64(&self, key: &str) -> Result<u64> {
        self.require(key)?
            .parse()
            .map_err(|_| Error::validation(format!("parameter `{key}` must be a nonnegative integer")))
    }

    fn get_str(&self, key: &str) -> Result<&str> {
        self.require(key)
    }

    fn out_dir(&self) -> PathBuf {
        PathBuf::from(self.entries.get("out").map(String::as_str).unwrap_or("out"))
    }

    /// Render the effective configuration (sorted, one `key = value` line).
    fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    fn dump(&self, out_dir: &Path) -> Result<()> {
        write_text(&out_dir.join("effective_config.txt"), &self.render())
    }
}

/// CLI entry point: parse arguments and dispatch.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> Result<()> {
    let argv: Vec<String> = std::iter::once("lowband".to_string())
        .chain(args)
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(
            e.kind(),
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
        ) =>
        {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(Error::validation(e.to_string())),
    };
    match cli.command {
        Command::Selftest { corrupt_filter } => cmd_selftest(corrupt_filter),
        Command::Solve(params) => cmd_solve(&params),
        Command::Score {
            original,
            reconstruction,
            max_lag,
        } => cmd_score(&original, &reconstruction, max_lag),
        Command::Experiment { name, params } => cmd_experiment(&name, &params),
        Command::Helmholtz(params) => cmd_helmholtz(&params),
    }
}

fn cmd_selftest(corrupt_filter: bool) -> Result<()> {
    let filters = if corrupt_filter {
        Some(CORRUPTED_FILTERS)
    } else {
        None
    };
    let report = run_selftest_with(filters)?;
    print!("{}", report.render());
    if report.all_passed() {
        Ok(())
    } else {
        Err(Error::numerical("selftest failed"))
    }
}

fn cmd_solve(params: &ParamArgs) -> Result<()> {
    // Defaults match the bundled Gaussian-derivative benchmark signal.
    let cfg = RunConfig::resolve(
        &[
            ("T", "2"),
            ("M", "129"),
            ("levels", "3"),
            ("method", "el0m"),
            ("beta", "0.01"),
            ("gamma", "0.0202"),
            ("tol", "1e-6"),
            ("max_iter", "20000"),
            ("out", "out"),
        ],
        params,
    )?;
    let input = PathBuf::from(cfg.get_str("input")?);
    let (rows, values) = read_measurement_csv(&input)?;
    let m = cfg.get_usize("M")?;
    let t_total = cfg.get_f64("T")?;
    let grid = TimeGrid::new(t_total, m)?;
    let levels = cfg.get_usize("levels")?;
    let plan = SamplingPlan::from_rows(m, rows.iter().copied())?;
    if plan.d() != values.len() {
        return Err(Error::validation(format!(
            "measurement rows are not conjugate-closed: plan needs {} rows, file has {}",
            plan.d(),
            values.len()
        )));
    }
    // Reorder values into the plan's sorted row order.
    let mut r = vec![Complex64::new(0.0, 0.0); plan.d()];
    for (&row, &v) in rows.iter().zip(&values) {
        let pos = plan
            .position_of(row)
            .expect("plan built from these rows contains each of them");
        r[pos] = v;
    }
    let framelet = FrameletSystem::new(m, levels)?;
    let op = MeasurementOperator::build(plan, levels)?;
    let tol = cfg.get_f64("tol")?;
    let max_iter = cfg.get_usize("max_iter")?;
    let method = cfg.get_str("method")?.to_string();

    let out_dir = cfg.out_dir();
    fs::create_dir_all(&out_dir)?;
    cfg.dump(&out_dir)?;

    let (y, trace) = match method.as_str() {
        "el0m" => {
            let reg = RegParams::new(cfg.get_f64("beta")?, cfg.get_f64("gamma")?)?;
            let mut sc = SolverConfig::new(reg);
            sc.tol = tol;
            sc.max_iter = max_iter;
            let (_, y, trace) = el0m_solve(&op, &r, &sc)?;
            (y, trace)
        }
        "l1m" => {
            let (y, trace) = l1m_solve(&op, &r, cfg.get_f64("gamma")?, tol, max_iter)?;
            (y, trace)
        }
        other => {
            return Err(Error::validation(format!(
                "method must be `el0m` or `l1m`, got `{other}`"
            )))
        }
    };
    let u = reconstruct_signal(&framelet, &y, 1.0)?;
    let times = grid.times();
    write_signal_csv(&out_dir.join("reconstruction.csv"), &times, &u)?;
    write_trace_csv(&out_dir.join("trace.csv"), &trace)?;
    if params.svg {
        write_svg_overlay(
            &out_dir.join("reconstruction.svg"),
            &format!("{method} reconstruction"),
            &times,
            &[(method.as_str(), u.as_slice())],
        )?;
    }
    println!(
        "solve: method={method} iterations={} converged={} -> {}",
        trace.iterations,
        trace.converged,
        out_dir.join("reconstruction.csv").display()
    );
    Ok(())
}

fn cmd_score(original: &Path, reconstruction: &Path, max_lag: usize) -> Result<()> {
    let (_, orig) = read_signal_csv(original)?;
    let (_, reco) = read_signal_csv(reconstruction)?;
    if orig.len() != reco.len() {
        return Err(Error::validation(format!(
            "length mismatch: original {} vs reconstruction {}",
            orig.len(),
            reco.len()
        )));
    }
    println!("snr_db = {}", fmt_f64(snr(&orig, &reco)?));
    println!("scaled_snr_db = {}", fmt_f64(scaled_snr(&orig, &reco)?));
    println!(
        "aligned_snr_db = {} (max_lag {max_lag})",
        fmt_f64(aligned_snr(&orig, &reco, max_lag)?)
    );
    Ok(())
}

fn emit_report(report: &ExperimentReport, out_dir: &Path) -> Result<()> {
    report.write_csv(&out_dir.join("report.csv"))?;
    print!("{}", report.format_table());
    Ok(())
}

fn emit_record_pgm(out_dir: &Path, name: &str, record: &ShotRecord) -> Result<()> {
    write_pgm(
        &out_dir.join(format!("record_{name}.pgm")),
        record.grid.m,
        record.receivers.len(),
        &record.data,
    )
}

fn cmd_experiment(name: &str, params: &ParamArgs) -> Result<()> {
    let cfg = RunConfig::resolve(&[("seed", "20260823"), ("mode", "fast"), ("out", "out")], params)?;
    let out_dir = cfg.out_dir();
    fs::create_dir_all(&out_dir)?;
    cfg.dump(&out_dir)?;
    let seed = cfg.get_u64("seed")?;
    match name {
        "table2" => emit_report(&run_table2()?, &out_dir),
        "table1" => emit_report(&run_table1(seed)?, &out_dir),
        "table3" => {
            let sigmas: Vec<f64> = match cfg.entries.get("sigma") {
                Some(_) => vec![cfg.get_f64("sigma")?],
                None => TABLE3_SIGMAS.to_vec(),
            };
            emit_report(&run_table3(seed, &sigmas)?, &out_dir)
        }
        "homogeneous-ricker" | "homogeneous-gaussian" => {
            let (scenario, default_fmax) = if name == "homogeneous-ricker" {
                (Scenario::Ricker, 42.0)
            } else {
                (Scenario::Gaussian, 7.5)
            };
            let f_max = match cfg.entries.get("fmax") {
                Some(_) => cfg.get_f64("fmax")?,
                None => default_fmax,
            };
            let mode = match cfg.get_str("mode")? {
                "fd" => SpectraMode::Fd,
                _ => SpectraMode::Fast,
            };
            let run = run_homogeneous(scenario, f_max, mode)?;
            let times = run.grid.times();
            let mut series: Vec<(&str, &[f64])> = vec![("original", run.original.as_slice())];
            for (method, trace) in &run.traces {
                series.push((method.as_str(), trace.as_slice()));
            }
            write_svg_overlay(
                &out_dir.join("seismogram.svg"),
                &format!("{name} band [1, {f_max}] Hz"),
                &times,
                &series,
            )?;
            write_signal_csv(&out_dir.join("original.csv"), &times, &run.original)?;
            for (method, trace) in &run.traces {
                write_signal_csv(&out_dir.join(format!("reco_{method}.csv")), &times, trace)?;
            }
            emit_report(&run.report, &out_dir)
        }
        "layered" => {
            let f_max = match cfg.entries.get("fmax") {
                Some(_) => cfg.get_f64("fmax")?,
                None => 30.0,
            };
            let run = run_layered(f_max, LayeredModelKind::Layered)?;
            let method_filter = cfg.entries.get("method").cloned();
            for (method, record) in &run.records {
                if let Some(want) = &method_filter {
                    if want != method {
                        continue;
                    }
                }
                emit_record_pgm(&out_dir, method, record)?;
            }
            emit_report(&run.report, &out_dir)
        }
        other => Err(Error::validation(format!(
            "unknown experiment `{other}`; expected table1, table2, table3, \
             homogeneous-ricker, homogeneous-gaussian, or layered"
        ))),
    }
}

fn cmd_helmholtz(params: &ParamArgs) -> Result<()> {
    let cfg = RunConfig::resolve(
        &[
            ("velocity", "1500"),
            ("freq", "10"),
            ("h", "10"),
            ("nx", "201"),
            ("nz", "201"),
            ("pml", "20"),
            ("sx", "1000"),
            ("sz", "1000"),
            ("out", "out"),
        ],
        params,
    )?;
    let out_dir = cfg.out_dir();
    fs::create_dir_all(&out_dir)?;
    cfg.dump(&out_dir)?;

    let v = cfg.get_f64("velocity")?;
    let f = cfg.get_f64("freq")?;
    let h = cfg.get_f64("h")?;
    let (nx, nz) = (cfg.get_usize("nx")?, cfg.get_usize("nz")?);
    let src = (cfg.get_f64("sx")?, cfg.get_f64("sz")?);
    let model = VelocityModel::homogeneous(nx, nz, h, v)?;
    let mut problem = HelmholtzProblem::new(model, f, src);
    problem.pml_width = cfg.get_usize("pml")?;
    let field = helmholtz_solve(&problem)?;

    let values = field.interior_values();
    let re: Vec<f64> = values.iter().map(|z| z.re).collect();
    let im: Vec<f64> = values.iter().map(|z| z.im).collect();
    let mag: Vec<f64> = values.iter().map(|z| z.norm()).collect();
    write_grid_csv(&out_dir.join("field_re.csv"), nz, nx, &re)?;
    write_grid_csv(&out_dir.join("field_im.csv"), nz, nx, &im)?;
    write_pgm(&out_dir.join("field_mag.pgm"), nz, nx, &mag)?;

    // Green's-function validation: free-space Hankel oracle at interior
    // nodes far from both the source and the PML collar.
    let pml_margin = 200.0;
    let src_margin = 300.0;
    let (mut max_rel, mut max_phase, mut count) = (0.0f64, 0.0f64, 0usize);
    for j in 0..nz {
        for i in 0..nx {
            let (x, z) = (i as f64 * h, j as f64 * h);
            let edge = x
                .min(z)
                .min((nx - 1) as f64 * h - x)
                .min((nz - 1) as f64 * h - z);
            let r = ((x - src.0).powi(2) + (z - src.1).powi(2)).sqrt();
            if edge < pml_margin || r < src_margin {
                continue;
            }
            let got = field.at_interior(i, j);
            let want = greens_2d(f, v, r, problem.q_hat)?;
            max_rel = max_rel.max((got - want).norm() / want.norm());
            max_phase = max_phase.max((got / want).arg().abs());
            count += 1;
        }
    }
    println!(
        "helmholtz: {nx}x{nz} grid, f = {f} Hz, kappa*h = {}",
        fmt_f64(problem.kappa_h())
    );
    if count > 0 {
        println!(
            "greens validation over {count} nodes: max relative magnitude error {}, \
             max phase error {} rad",
            fmt_f64(max_rel),
            fmt_f64(max_phase)
        );
    } else {
        println!("greens validation skipped: no nodes clear the source/PML margins");
    }
    println!("fields written to {}", out_dir.display());
    Ok(())
}
