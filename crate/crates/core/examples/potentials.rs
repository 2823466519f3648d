//! Constrained operators through their potentials: the symbolic
//! substitution that removes a divergence constraint, and the spectral
//! identity `B ∘ C = −Δ` on divergence-free fields.

use cclab::criteria::{potential_substitute, zero_integral};
use cclab::opdsl::parse;
use cclab::spectral::fields::random_spectral_field;
use cclab::spectral::multipliers::neg_laplacian;
use cclab::spectral::{divergence, leray_project, potential_b, potential_c, Grid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = parse(
        r#"operator "div_curl" {
            dims 3;
            functions E: R^3 constraint curl0, B: R^3 constraint div0;
            expr = E[1]*B[1] + E[2]*B[2] + E[3]*B[3];
        }"#,
    )?;
    let (unconstrained, map) = potential_substitute(&spec)?;
    for (symbol, (potential, constraint)) in &map {
        println!("{} ({}) -> potential {}", symbol.as_str(), constraint.keyword(), potential.as_str());
    }
    println!("substituted: {}", unconstrained.body);
    println!("zero integral after substitution: {}", zero_integral(&unconstrained)?.value);

    let g = Grid::new(3, 32)?;
    let raw: Vec<_> = (0..3).map(|j| random_spectral_field(&g, "T", 5, 7 + j)).collect();
    let t = leray_project(&raw)?;
    let scale = t.iter().map(|c| c.max_abs()).fold(0.0, f64::max);
    println!("max |div T| / max |T| = {:.1e}", divergence(&t)?.max_abs() / scale);
    let bc = potential_b(&potential_c(&t)?)?;
    let err = bc
        .iter()
        .zip(&t)
        .map(|(a, b)| a.relative_max_error(&neg_laplacian(b)))
        .fold(0.0, f64::max);
    println!("max relative error of B(C(T)) = -ΔT: {err:.1e}");
    Ok(())
}
