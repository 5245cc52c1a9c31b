//! CSV series, JSON sidecars and gnuplot scripts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ptmetro::TimeSeries;
use serde::Serialize;

use crate::config::Grid;
use crate::error::CliError;

/// `{:.16e}` prints 17 significant digits, enough to round-trip an `f64`.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header `<axis>,<quantity>`, one row per grid point, LF line endings.
pub fn csv_string(series: &TimeSeries, axis: &str, quantity: &str) -> String {
    let mut out = String::with_capacity(48 * (series.len() + 1));
    let _ = writeln!(out, "{axis},{quantity}");
    for (x, v) in series.grid.iter().zip(&series.values) {
        let _ = writeln!(out, "{},{}", format_value(*x), format_value(*v));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Sidecar<'a, P: Serialize> {
    pub model: &'a str,
    pub params: P,
    pub quantity: &'a str,
    pub axis: &'a str,
    pub grid: Grid,
    pub label: &'a str,
    pub data: &'a str,
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`; returns the CSV path.
pub fn write_series<P: Serialize>(
    dir: &Path,
    stem: &str,
    series: &TimeSeries,
    sidecar: &Sidecar<'_, P>,
) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    std::fs::write(&csv_path, csv_string(series, sidecar.axis, sidecar.quantity))?;
    let json = serde_json::to_string_pretty(sidecar).map_err(|e| CliError::Io(e.into()))?;
    std::fs::write(dir.join(format!("{stem}.json")), json + "\n")?;
    Ok(csv_path)
}

/// A gnuplot script plotting each `(csv file name, title)` pair against column 1.
pub fn gnuplot_script(title: &str, xlabel: &str, ylabel: &str, lines: &[(String, String)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    let plots: Vec<String> = lines
        .iter()
        .map(|(file, name)| format!("'{file}' using 1:2 with lines title '{name}'"))
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}
