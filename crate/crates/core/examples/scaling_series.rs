//! The scaling experiment: the normalized pairing ρ(τ) of a fixed bump
//! family against rescaled Jacobians, printed as a table, followed by its
//! pass/fail checks.
//!
//! ```text
//! cargo run --release --example scaling_series -- [scaling|scaling-lp]
//! ```

use cclab::spectral::{run_experiment, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "scaling".into());
    let result = run_experiment(&name, &ExperimentConfig::with_seed(42))?;
    println!("{}", result.columns.join("\t"));
    for row in &result.rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.4e}")).collect();
        println!("{}", cells.join("\t"));
    }
    for c in &result.checks {
        println!("{} {} = {:.3e} ({} {:.3e})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.comparison, c.threshold);
    }
    Ok(())
}
