//! Reconstruction from noisy incomplete Fourier data: seeded Gaussian noise
//! is added to the observed rows (Hermitian-symmetrically, so measurements
//! stay consistent with a real signal) and the regularization is strengthened
//! accordingly.
//!
//! Run with: `cargo run --example noisy_measurements`

use lowband::evaluation::{
    add_noise, gaussian_measurements, gaussian_signal, signal_grid, snr, NoiseSpec,
};
use lowband::operators::{build_band_plan, FrameletSystem, MeasurementOperator};
use lowband::regularization::RegParams;
use lowband::solvers::{el0m_solve, l1m_solve, reconstruct_signal, SolverConfig, YUpdate};

fn main() -> lowband::Result<()> {
    let grid = signal_grid();
    let orig = gaussian_signal(&grid);
    let plan = build_band_plan(grid.m, grid.t_total, 0.5, 7.5)?;
    let r_exact = gaussian_measurements(&plan, &grid)?;

    let levels = 3;
    let framelet = FrameletSystem::new(grid.m, levels)?;
    let op = MeasurementOperator::build(plan.clone(), levels)?;

    for sigma in [0.0, 0.1, 0.3, 0.5] {
        let r = add_noise(&r_exact, &plan, &NoiseSpec { sigma, seed: 13 })?;
        // Noise calls for a stronger threshold than the exact-data setting.
        let (beta, gamma) = if sigma == 0.0 { (0.01, 0.0202) } else { (3.0, 3.0 / 0.6118) };
        let mut config = SolverConfig::new(RegParams::new(beta, gamma)?);
        config.max_iter = 10_000;
        config.y_update = YUpdate::InnerLoop { inner_max: 1, inner_tol: 0.0 };
        let (_, y, _) = el0m_solve(&op, &r, &config)?;
        let el0m_snr = snr(&orig, &reconstruct_signal(&framelet, &y, 1.0)?)?;

        let (y, _) = l1m_solve(&op, &r, 0.02, 1e-6, 20_000)?;
        let l1m_snr = snr(&orig, &reconstruct_signal(&framelet, &y, 1.0)?)?;

        println!("sigma {sigma:>4}: EL0M {el0m_snr:6.2} dB, L1M {l1m_snr:6.2} dB");
    }
    Ok(())
}
