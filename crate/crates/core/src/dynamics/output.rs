use std::fmt::Write as _;
use std::io::Write;

use super::Trajectory;
use crate::error::{Error, Result};

/// Channel columns that follow the state in CSV output. A channel the model
/// does not have (the Casimir of `BC_N`) is written as 0.
pub const CSV_FIXED_CHANNELS: [&str; 3] = ["H_drift", "casimir_drift", "zc_residual"];

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::Config(format!("write failed: {e}"))
}

/// `t,x_1..x_N,X_1..X_N[,E,F,H],H_drift,casimir_drift,zc_residual`.
pub fn write_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend(traj.coordinates.iter().map(ToString::to_string));
    header.extend(CSV_FIXED_CHANNELS.iter().map(|s| s.to_string()));
    w.write_record(&header).map_err(io_error)?;
    for (i, (t, p)) in traj.times.iter().zip(&traj.states).enumerate() {
        let mut row = vec![t.to_string()];
        row.extend(p.values.iter().map(ToString::to_string));
        for name in CSV_FIXED_CHANNELS {
            let v = traj.channel(name).and_then(|c| c.get(i)).copied().unwrap_or(0.0);
            row.push(v.to_string());
        }
        w.write_record(&row).map_err(io_error)?;
    }
    w.flush().map_err(io_error)
}

pub fn write_json<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    serde_json::to_writer(out, traj).map_err(io_error)
}

const PANEL_W: f64 = 640.0;
const PANEL_H: f64 = 160.0;
const MARGIN: f64 = 60.0;

/// One line plot per channel, stacked vertically.
pub fn write_svg<W: Write>(traj: &Trajectory, mut out: W) -> Result<()> {
    let names: Vec<&String> = traj.channels.keys().collect();
    let height = names.len().max(1) as f64 * (PANEL_H + MARGIN) + MARGIN;
    let width = PANEL_W + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace" font-size="12">"#
    );
    let t0 = traj.times.first().copied().unwrap_or(0.0);
    let t1 = traj.times.last().copied().unwrap_or(1.0);
    let t_span = if t1 > t0 { t1 - t0 } else { 1.0 };
    for (k, name) in names.iter().enumerate() {
        let values = &traj.channels[*name];
        let top = MARGIN + k as f64 * (PANEL_H + MARGIN);
        let (lo, hi) = values
            .iter()
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
        let span = if hi > lo { hi - lo } else { 1.0 };
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN}" y="{top}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(s, r#"<text x="{MARGIN}" y="{}">{name}</text>"#, top - 6.0);
        let _ = writeln!(s, r#"<text x="4" y="{}">{hi:.2e}</text>"#, top + 12.0);
        let _ = writeln!(s, r#"<text x="4" y="{}">{lo:.2e}</text>"#, top + PANEL_H);
        let points: Vec<String> = traj
            .times
            .iter()
            .zip(values)
            .filter(|(_, v)| v.is_finite())
            .map(|(t, v)| {
                let x = MARGIN + (t - t0) / t_span * PANEL_W;
                let y = top + PANEL_H - (v - lo) / span * PANEL_H;
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="steelblue" points="{}"/>"#,
            points.join(" ")
        );
    }
    s.push_str("</svg>\n");
    out.write_all(s.as_bytes()).map_err(io_error)
}
