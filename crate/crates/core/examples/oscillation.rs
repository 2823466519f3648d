//! The oscillating three-dimensional example: pointwise plateau values and
//! the decay of the weak pairing as the frequency grows.
//!
//! ```text
//! cargo run --release --example oscillation
//! ```

use cclab::spectral::experiments::OSCILLATION_OPERATOR;
use cclab::spectral::{run_experiment, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("operator:\n{OSCILLATION_OPERATOR}");
    let result = run_experiment("oscillation", &ExperimentConfig::with_seed(42))?;
    println!("{}", result.columns.join("\t"));
    for row in &result.rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.4e}")).collect();
        println!("{}", cells.join("\t"));
    }
    for c in &result.checks {
        println!("{} {} = {:.3e}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value);
    }
    Ok(())
}
