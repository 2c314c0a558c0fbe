//! A small layered-earth shot record end to end: per-frequency Helmholtz
//! solves over a band-limited source, measurement assembly at a line of
//! surface receivers, and sparse reconstruction of every trace.  The model
//! is kept coarse (h = 20 m, band [1, 15] Hz) so the example finishes in
//! well under a minute; the `layered` experiment runs the full-size version.
//!
//! Run with: `cargo run --example shot_record`

use lowband::io::write_pgm;
use lowband::operators::{build_band_plan_snapped, FrameletSystem};
use lowband::seismic::{
    first_arrival_sample, generate_shot_record, Method, SourceWavelet, TimeGrid, VelocityModel,
};

fn main() -> lowband::Result<()> {
    let model = VelocityModel::three_layer(101, 101, 20.0, 600.0, 1300.0, 2000.0, 2500.0, 4000.0)?;
    let wavelet = SourceWavelet::Ricker { f0: 25.0 };
    let src = (0.0, 1000.0);
    let receivers: Vec<(f64, f64)> = (0..=20).map(|j| (100.0 * j as f64, 0.0)).collect();
    let grid = TimeGrid::new(2.24, 280)?;
    let plan = build_band_plan_snapped(grid.m, grid.t_total, 1.0, 15.0)?;
    let framelet = FrameletSystem::new(grid.m, 3)?;
    println!(
        "{} receivers, {} frequency solves, band [1, 15] Hz",
        receivers.len(),
        plan.low_half_rows().len()
    );

    for method in [
        Method::Idft,
        Method::L1mAuto { gamma_frac: 0.005, tol: 1e-6, max_iter: 5000 },
        Method::El0mAuto { thresh_frac: 0.2, ratio: 0.5, tol: 1e-6, max_iter: 5000 },
    ] {
        let record = generate_shot_record(
            &model, &wavelet, src, &receivers, &grid, &plan, &framelet, &method, false,
        )?;
        let onset = first_arrival_sample(&record.trace(10));
        let path = format!("target/shot_record_{}.pgm", method.name());
        write_pgm(std::path::Path::new(&path), grid.m, receivers.len(), &record.data)?;
        println!(
            "{:5}: first arrival at receiver (1000, 0) = sample {:?}, record -> {path}",
            method.name(),
            onset
        );
    }
    Ok(())
}
