//! Scaling levels and the first-slot step decomposition of a mixed-order
//! bilinear operator, with a check that the pieces reassemble it.

use cclab::criteria::{scaling_decompose, step_decompose, zero_integral};
use cclab::opdsl::parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = parse(
        r#"operator "mixed" {
            dims 2;
            functions u: R^1, v: R^1;
            expr = dx(u)*dy(v) - dy(u)*dx(v) + dxx(u)*dy(v) - dy(u)*dxx(v) + dx(u)*dxy(v) - dxy(u)*dx(v);
        }"#,
    )?;
    println!("operator: {}", spec.body);
    println!("zero integral: {}", zero_integral(&spec)?.value);
    for (level, piece) in scaling_decompose(&spec) {
        println!("level {level}: {}  (zero integral: {})", piece.body, zero_integral(&piece)?.value);
    }
    let steps = step_decompose(&spec)?;
    for ((l1, l2), piece) in &steps.pieces {
        println!("step ({l1},{l2}): {}", piece.body);
    }
    for (axis, r) in &steps.remainders {
        println!("divergence remainder D{}: {r}", axis + 1);
    }
    assert_eq!(steps.recombine(spec.dim)?, spec.body);
    println!("pieces + remainders reproduce the operator");
    Ok(())
}
