//! Writes an experiment's CSV/JSON output and a raw snapshot of a Jacobian
//! field, then reads the snapshot back.
//!
//! ```text
//! cargo run --example field_snapshot -- [out-dir]
//! ```

use std::path::PathBuf;

use cclab::spectral::export::{read_real_snapshot, write_field_snapshot, write_result};
use cclab::spectral::fields::random_spectral_field;
use cclab::spectral::{jacobian, run_experiment, ExperimentConfig, Grid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("cclab-snapshot"), PathBuf::from);
    std::fs::create_dir_all(&dir)?;

    let result = run_experiment("ns", &ExperimentConfig::with_seed(1))?;
    let (csv, json) = write_result(&result, &dir)?;
    println!("wrote {} and {}", csv.display(), json.display());

    let g = Grid::new(2, 64)?;
    let u = [random_spectral_field(&g, "u", 6, 1), random_spectral_field(&g, "u", 6, 2)];
    let ju = jacobian(&u)?;
    let path = dir.join("jacobian.f64");
    let sidecar = write_field_snapshot(&ju, &path)?;
    let back = read_real_snapshot(&path)?;
    let same = back.iter().zip(ju.real_values()).all(|(a, b)| *a == b);
    println!("wrote {} ({} samples, sidecar {}); round trip exact: {same}", path.display(), back.len(), sidecar.display());
    Ok(())
}
