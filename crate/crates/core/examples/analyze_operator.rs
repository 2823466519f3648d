//! Parses an operator file (or a built-in Monge–Ampère form) and prints the
//! full analysis report as JSON.
//!
//! ```text
//! cargo run --example analyze_operator -- [file.op]
//! ```

use cclab::criteria::analyze;
use cclab::opdsl::parse_file;

const DEFAULT: &str = r#"
operator "monge_ampere_uv" {
    dims 2;
    functions u: R^1, v: R^1;
    expr = dxx(u)*dyy(v) + dyy(u)*dxx(v) - 2*dxy(u)*dxy(v);
}
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    for spec in parse_file(&text)? {
        let report = analyze(&spec)?;
        println!("{}", serde_json::to_string_pretty(&report.to_json())?);
        println!(
            "{}: zero integral = {}, null Lagrangian = {}, H1 = {}",
            spec.name,
            report.zero_integral.value,
            report.null_lagrangian.value,
            report.computed("h1_regular").unwrap_or_else(|| "unknown".into())
        );
    }
    Ok(())
}
