//! Compares the as-printed multilinear coefficient condition with the Euler
//! verdict on seeded random trilinear operators and writes every
//! disagreement as an operator file.
//!
//! ```text
//! cargo run --release --example binomial_condition_survey -- [seed=7] [count] [out-dir]
//! ```

use std::path::PathBuf;

use cclab::criteria::random::trilinear_survey;
use cclab::criteria::{binomial_product_condition, zero_integral};
use cclab::opdsl::{pretty_print, CoefficientTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed: u64 = args.first().map_or(Ok(7), |s| s.parse())?;
    let count: usize = args.get(1).map_or(Ok(120), |s| s.parse())?;
    let out = args.get(2).map(PathBuf::from);

    let survey = trilinear_survey(seed, count)?;
    println!(
        "checked {} operators ({} with zero integral); coefficient condition disagrees on {}; exact Leibniz criterion disagrees on {}",
        survey.checked,
        survey.zero_integral,
        survey.counterexamples.len(),
        survey.leibniz_disagreements.len()
    );
    for spec in &survey.counterexamples {
        let table = CoefficientTable::from_spec(spec)?;
        println!(
            "{}: n={}, Euler says {}, coefficient condition says {}",
            spec.name,
            spec.dim,
            zero_integral(spec)?.value,
            binomial_product_condition(&table)?.value
        );
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(format!("{}.op", spec.name)), pretty_print(spec))?;
        }
    }
    Ok(())
}
