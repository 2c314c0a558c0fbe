//! Demonstrates the structural identities of the measurement chain
//! `K = R·F·W*`: the framelet transform is an isometry (`W*W = I`), the
//! measurement operator is a coisometry (`KK* = I`), and `K*K` is a real
//! idempotent projector — the property that makes the EL0M y-update a
//! closed-form solve.
//!
//! Run with: `cargo run --example operator_identities`

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lowband::operators::{
    build_band_plan, framelet_analysis, framelet_synthesis, FourierSpec, FrameletSystem,
    MeasurementOperator,
};

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

fn main() -> lowband::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (m, levels) = (129usize, 3usize);
    let framelet = FrameletSystem::new(m, levels)?;
    let plan = build_band_plan(m, 2.0, 0.5, 7.5)?;
    let op = MeasurementOperator::new(FourierSpec::new(m)?, plan.clone(), framelet.clone())?;
    println!(
        "M = {m}, levels = {levels} (N = {}), d = {} measurement rows",
        framelet.coeff_len(),
        op.range_dim()
    );

    // W*W = I: analysis followed by synthesis restores the signal.
    let v: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let back = framelet_synthesis(&framelet, &framelet_analysis(&framelet, &v)?)?;
    println!(
        "|W*W v - v|_inf = {:.3e}",
        max_abs(v.iter().zip(&back).map(|(a, b)| (a - b).abs()))
    );

    // K K* = I on conjugate-consistent measurements.
    let low: Vec<(usize, Complex64)> = plan
        .low_half_rows()
        .into_iter()
        .map(|row| {
            (
                row,
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        })
        .collect();
    let w = plan.hermitian_fill(&low)?;
    let round = op.k_apply(&op.k_adjoint(&w)?)?;
    println!(
        "|KK* w - w|_inf = {:.3e}",
        max_abs(w.iter().zip(&round).map(|(a, b)| (a - b).norm()))
    );

    // K*K is idempotent: applying the projector twice changes nothing.
    let b: Vec<f64> = (0..framelet.coeff_len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let p = op.normal_apply(&b)?;
    let pp = op.normal_apply(&p)?;
    println!(
        "|(K*K)^2 b - K*K b|_inf = {:.3e}",
        max_abs(p.iter().zip(&pp).map(|(a, b)| (a - b).abs()))
    );

    // normal_solve inverts (I + c K*K) exactly via the idempotence identity.
    let c = 1.7;
    let y = op.normal_solve(c, &b)?;
    let ky = op.normal_apply(&y)?;
    println!(
        "|(I + {c} K*K) y - b|_inf = {:.3e}",
        max_abs(
            y.iter()
                .zip(&ky)
                .zip(&b)
                .map(|((yi, ki), bi)| (yi + c * ki - bi).abs())
        )
    );
    Ok(())
}
