//! Serialization of experiment results (CSV and JSON) and raw field
//! snapshots (little-endian `f64` arrays with a JSON sidecar).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::experiments::ExperimentResult;
use super::grid::GridField;
use super::SpectralError;

/// CSV text: a header row, then one row per parameter point.
pub fn to_csv(result: &ExperimentResult) -> Result<String, SpectralError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&result.columns)?;
    for row in &result.rows {
        w.write_record(row.iter().map(|v| format_number(*v)))?;
    }
    let bytes = w.into_inner().map_err(|e| SpectralError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Shortest round-trip representation, so output is byte-stable.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

/// Writes `<dir>/<id>.csv` and `<dir>/<id>.json`; returns both paths.
pub fn write_result(result: &ExperimentResult, dir: &Path) -> Result<(PathBuf, PathBuf), SpectralError> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{}.csv", result.id));
    let json_path = dir.join(format!("{}.json", result.id));
    fs::write(&csv_path, to_csv(result)?)?;
    let text = serde_json::to_string_pretty(&result.to_json()).expect("json values serialize");
    fs::write(&json_path, text + "\n")?;
    Ok((csv_path, json_path))
}

/// Writes the samples of `field` as little-endian `f64` (real parts, or
/// interleaved real/imaginary parts for complex fields) to `path`, and a
/// sidecar `path.json` describing the layout.
pub fn write_field_snapshot(field: &GridField, path: &Path) -> Result<PathBuf, SpectralError> {
    let mut bytes = Vec::with_capacity(field.data.len() * if field.real { 8 } else { 16 });
    for c in &field.data {
        bytes.extend_from_slice(&c.re.to_le_bytes());
        if !field.real {
            bytes.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    let mut f = fs::File::create(path)?;
    f.write_all(&bytes)?;
    let g = field.grid();
    let sidecar = json!({
        "dims": g.dim(),
        "resolution": g.n(),
        "symbol": field.symbol,
        "real": field.real,
        "dtype": "f64",
        "endianness": "little",
        "layout": if field.real { "row-major, last axis fastest" } else { "row-major, last axis fastest, interleaved re/im" },
        "box": [-std::f64::consts::PI, std::f64::consts::PI],
    });
    let mut side = path.as_os_str().to_owned();
    side.push(".json");
    let side = PathBuf::from(side);
    fs::write(&side, serde_json::to_string_pretty(&sidecar).expect("json values serialize") + "\n")?;
    Ok(side)
}

/// Reads a real snapshot written by [`write_field_snapshot`].
pub fn read_real_snapshot(path: &Path) -> Result<Vec<f64>, SpectralError> {
    let bytes = fs::read(path)?;
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}
