//! Quadrature cross-check of the symbolic verdict for every bundled corpus
//! operator (smaller grids than the CLI default, for speed).
//!
//! ```text
//! cargo run --release --example numeric_crosscheck
//! ```

use cclab::corpus;
use cclab::criteria::zero_integral;
use cclab::spectral::{numeric_check, NumericOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = NumericOptions {
        grid: Some(64),
        trials: 4,
        ..NumericOptions::default()
    };
    println!("{:<26} {:<6} {:>12} {:>12}  agrees", "operator", "zero", "max |∫|/sc", "witness");
    for spec in corpus::load().map_err(|(f, e)| format!("{f}: {e}"))? {
        let verdict = zero_integral(&spec)?.value;
        let n = numeric_check(&spec, &opts)?;
        println!(
            "{:<26} {:<6} {:>12.2e} {:>12}  {}",
            spec.name,
            verdict,
            n.max_rel_integral,
            n.witness_rel_integral.map_or("-".into(), |w| format!("{w:.2e}")),
            n.agrees
        );
    }
    Ok(())
}
