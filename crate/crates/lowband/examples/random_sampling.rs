//! Recovery from a *random* subset of low-frequency rows: half of the
//! candidate frequencies {0.5, 1, …, 15} Hz are drawn with a seeded
//! generator, the plan is closed under conjugation, and both solvers
//! reconstruct from the same incomplete data.
//!
//! Run with: `cargo run --example random_sampling`

use lowband::evaluation::{gaussian_measurements, gaussian_signal, signal_grid, snr};
use lowband::operators::{build_random_plan, FrameletSystem, MeasurementOperator};
use lowband::regularization::RegParams;
use lowband::solvers::{el0m_solve, l1m_solve, reconstruct_signal, SolverConfig, YUpdate};

fn main() -> lowband::Result<()> {
    let grid = signal_grid();
    let orig = gaussian_signal(&grid);
    // Candidate rows for 0.5..=15 Hz on the Δf = 0.5 Hz grid: m = f·T + 1.
    let candidates: Vec<usize> = (2..=31).collect();

    for seed in [7u64, 8, 9] {
        let plan = build_random_plan(grid.m, &candidates, 0.5, seed)?;
        let r = gaussian_measurements(&plan, &grid)?;
        let levels = 3;
        let framelet = FrameletSystem::new(grid.m, levels)?;
        let op = MeasurementOperator::build(plan.clone(), levels)?;

        let mut config = SolverConfig::new(RegParams::new(0.38, 0.38 / 0.6118)?);
        config.max_iter = 10_000;
        config.y_update = YUpdate::InnerLoop { inner_max: 3, inner_tol: 0.0 };
        let (_, y, _) = el0m_solve(&op, &r, &config)?;
        let el0m_snr = snr(&orig, &reconstruct_signal(&framelet, &y, 1.0)?)?;

        let (y, _) = l1m_solve(&op, &r, 0.02, 1e-6, 20_000)?;
        let l1m_snr = snr(&orig, &reconstruct_signal(&framelet, &y, 1.0)?)?;

        println!(
            "seed {seed}: {} rows observed, EL0M {el0m_snr:6.2} dB, L1M {l1m_snr:6.2} dB",
            plan.d()
        );
    }
    Ok(())
}
