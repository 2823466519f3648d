//! The coefficient-table criteria side by side with the Euler verdict: the
//! fast bilinear sum, the homogeneous variant and the parity rules.

use cclab::criteria::{bilinear_criterion, homogeneous_criterion, parity_classify, parity_spec, zero_integral, ParityShape};
use cclab::diffpoly::int;
use cclab::multiindex::MultiIndex;
use cclab::opdsl::{parse, CoefficientTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bilinear = [
        "dims 2; functions u: R^1, v: R^1; expr = dx(u)*dy(v) - dy(u)*dx(v);",
        "dims 2; functions u: R^1, v: R^1; expr = dx(u)*dy(v);",
        "dims 1; functions u: R^1, v: R^1; expr = u*dxx(v) - dxx(u)*v;",
        "dims 1; functions u: R^1, v: R^1; expr = u*dxx(v) + dx(u)*dx(v);",
    ];
    for body in bilinear {
        let spec = parse(&format!("operator \"b\" {{ {body} }}"))?;
        let table = CoefficientTable::from_spec(&spec)?;
        let homogeneous = if table.is_slot_homogeneous() {
            homogeneous_criterion(&table)?.value.to_string()
        } else {
            "n/a".into()
        };
        println!(
            "{:<40} euler={:<5} bilinear={:<5} homogeneous={}",
            spec.body.to_string(),
            zero_integral(&spec)?.value,
            bilinear_criterion(&table)?.value,
            homogeneous
        );
    }

    println!("\nparity rules for P = ∂^α, n = 2:");
    for alpha in [[0, 0], [1, 0], [1, 1], [2, 1]] {
        let p = [(MultiIndex::new(&alpha)?, int(1))];
        let mut row = format!("  α = {alpha:?}:");
        for shape in [ParityShape::Difference, ParityShape::Sum, ParityShape::Product] {
            let spec = parity_spec(shape, 2, &p);
            let value = spec.body.is_zero() || parity_classify(&spec)?.value;
            row += &format!(" {shape:?}={value}");
        }
        println!("{row}");
    }
    Ok(())
}
