//! File emission and parsing: CSV, binary PGM (P5), and SVG overlays.
//!
//! CSV dialect is fixed — comma separators, `.` decimal point, one header
//! row, LF line endings — and floating-point values are written with Rust's
//! shortest round-trip formatting, so identical data always produces byte
//! identical files.  PGM images are binary P5 with maxval 255 plus a sidecar
//! text file recording the normalization.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::solvers::SolveTrace;

/// Format a float with shortest round-trip representation (deterministic).
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // normalize -0.0 so byte-identity does not depend on sign of zero
        "0".to_string()
    } else {
        format!("{x}")
    }
}

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, content.as_bytes())?;
    Ok(())
}

/// Time/value signal CSV with columns `t,u`.
pub fn write_signal_csv(path: &Path, times: &[f64], values: &[f64]) -> Result<()> {
    if times.len() != values.len() {
        return Err(Error::validation("signal CSV: t and u lengths differ"));
    }
    let mut s = String::from("t,u\n");
    for (t, u) in times.iter().zip(values) {
        let _ = writeln!(s, "{},{}", fmt_f64(*t), fmt_f64(*u));
    }
    write_text(path, &s)
}

/// Measurement CSV with columns `row_index,re,im`.
pub fn write_measurement_csv(path: &Path, rows: &[usize], values: &[Complex64]) -> Result<()> {
    if rows.len() != values.len() {
        return Err(Error::validation("measurement CSV: row/value lengths differ"));
    }
    let mut s = String::from("row_index,re,im\n");
    for (row, z) in rows.iter().zip(values) {
        let _ = writeln!(s, "{},{},{}", row, fmt_f64(z.re), fmt_f64(z.im));
    }
    write_text(path, &s)
}

/// Parse a measurement CSV; returns (1-based rows, complex values).
pub fn read_measurement_csv(path: &Path) -> Result<(Vec<usize>, Vec<Complex64>)> {
    let content = fs::read_to_string(path)?;
    let mut lines = content.lines();
    match lines.next() {
        Some(header) if header.trim() == "row_index,re,im" => {}
        _ => {
            return Err(Error::validation(format!(
                "{}: expected header 'row_index,re,im'",
                path.display()
            )))
        }
    }
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::validation(format!(
                "{} line {}: expected 3 fields",
                path.display(),
                lineno + 2
            )));
        }
        let parse_err = |what: &str| {
            Error::validation(format!(
                "{} line {}: malformed {what}",
                path.display(),
                lineno + 2
            ))
        };
        rows.push(fields[0].trim().parse::<usize>().map_err(|_| parse_err("row_index"))?);
        let re = fields[1].trim().parse::<f64>().map_err(|_| parse_err("re"))?;
        let im = fields[2].trim().parse::<f64>().map_err(|_| parse_err("im"))?;
        values.push(Complex64::new(re, im));
    }
    Ok((rows, values))
}

/// Parse a `t,u` signal CSV.
pub fn read_signal_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let content = fs::read_to_string(path)?;
    let mut lines = content.lines();
    match lines.next() {
        Some(header) if header.trim() == "t,u" => {}
        _ => {
            return Err(Error::validation(format!(
                "{}: expected header 't,u'",
                path.display()
            )))
        }
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::validation(format!(
                "{} line {}: expected 2 fields",
                path.display(),
                lineno + 2
            )));
        }
        let parse = |s: &str| {
            s.trim().parse::<f64>().map_err(|_| {
                Error::validation(format!(
                    "{} line {}: malformed number",
                    path.display(),
                    lineno + 2
                ))
            })
        };
        times.push(parse(fields[0])?);
        values.push(parse(fields[1])?);
    }
    Ok((times, values))
}

/// Solver trace CSV with columns `iter,F,Q,G,support_size,rel_change,fp_residual`.
/// `Q` and `G` are empty for L1M traces.
pub fn write_trace_csv(path: &Path, trace: &SolveTrace) -> Result<()> {
    let mut s = String::from("iter,F,Q,G,support_size,rel_change,fp_residual\n");
    for rec in &trace.records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            rec.iter,
            fmt_f64(rec.f),
            rec.q.map(fmt_f64).unwrap_or_default(),
            rec.g.map(fmt_f64).unwrap_or_default(),
            rec.support_size,
            fmt_f64(rec.rel_change),
            fmt_f64(rec.fp_residual),
        );
    }
    write_text(path, &s)
}

/// Real matrix as CSV, one row per line (used for velocity grids and fields).
pub fn write_grid_csv(path: &Path, rows: usize, cols: usize, data: &[f64]) -> Result<()> {
    if data.len() != rows * cols {
        return Err(Error::validation("grid CSV: dimension mismatch"));
    }
    let mut s = String::new();
    for i in 0..rows {
        let line: Vec<String> = (0..cols).map(|j| fmt_f64(data[i * cols + j])).collect();
        let _ = writeln!(s, "{}", line.join(","));
    }
    write_text(path, &s)
}

/// Binary P5 PGM.  Values are mapped linearly from `[−scale, +scale]` to
/// `[0, 255]` where `scale = max|data|`; the mapping is recorded in a sidecar
/// `<path>.txt`.
pub fn write_pgm(path: &Path, rows: usize, cols: usize, data: &[f64]) -> Result<()> {
    if data.len() != rows * cols {
        return Err(Error::validation("PGM: dimension mismatch"));
    }
    let scale = data.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let mut bytes = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    for &x in data {
        let v = if scale > 0.0 {
            ((x / scale + 1.0) * 127.5).round().clamp(0.0, 255.0) as u8
        } else {
            128
        };
        bytes.push(v);
    }
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, &bytes)?;
    let sidecar = format!(
        "format: P5, maxval 255\nrows: {rows}\ncols: {cols}\nnormalization: linear map of [-{s}, +{s}] to [0, 255]\n",
        s = fmt_f64(scale)
    );
    write_text(&path.with_extension("pgm.txt"), &sidecar)
}

/// SVG overlay of one or more named line series over a shared x-axis.
/// No timestamps or random ids — output is a pure function of the data.
pub fn write_svg_overlay(
    path: &Path,
    title: &str,
    x: &[f64],
    series: &[(&str, &[f64])],
) -> Result<()> {
    const W: f64 = 900.0;
    const H: f64 = 420.0;
    const MARGIN: f64 = 45.0;
    const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

    if series.is_empty() || x.is_empty() {
        return Err(Error::validation("SVG overlay: empty data"));
    }
    for (_, ys) in series {
        if ys.len() != x.len() {
            return Err(Error::validation("SVG overlay: series length mismatch"));
        }
    }
    let (xmin, xmax) = (x[0], x[x.len() - 1]);
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (_, ys) in series {
        for &v in *ys {
            ymin = ymin.min(v);
            ymax = ymax.max(v);
        }
    }
    if ymin == ymax {
        ymin -= 1.0;
        ymax += 1.0;
    }
    let sx = (W - 2.0 * MARGIN) / (xmax - xmin).max(f64::MIN_POSITIVE);
    let sy = (H - 2.0 * MARGIN) / (ymax - ymin);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(
        s,
        "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/><text x=\"{}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
        W / 2.0,
        title
    );
    for (idx, (name, ys)) in series.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let mut points = String::new();
        for (xi, yi) in x.iter().zip(*ys) {
            let px = MARGIN + (xi - xmin) * sx;
            let py = H - MARGIN - (yi - ymin) * sy;
            let _ = write!(points, "{:.2},{:.2} ", px, py);
        }
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\" points=\"{}\"/>",
            points.trim_end()
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{}</text>",
            W - MARGIN - 140.0,
            30.0 + 16.0 * idx as f64,
            name
        );
    }
    let _ = writeln!(s, "</svg>");
    write_text(path, &s)
}
