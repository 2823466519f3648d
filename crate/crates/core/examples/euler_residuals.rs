//! Euler–Lagrange residuals and total-divergence detection for a few
//! classic Lagrangians, including a witness for one that is not a
//! divergence.

use cclab::criteria::zero_integral;
use cclab::opdsl::parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("dirichlet", "dims 2; functions u: R^1; expr = dx(u)^2 + dy(u)^2;"),
        ("jacobian", "dims 2; functions u: R^2; expr = dx(u[1])*dy(u[2]) - dy(u[1])*dx(u[2]);"),
        ("hessian", "dims 2; functions u: R^1; expr = dxx(u)*dyy(u) - dxy(u)^2;"),
        ("transport", "dims 1; functions u: R^1; expr = u^2*dx(u);"),
    ];
    for (name, body) in cases {
        let spec = parse(&format!("operator \"{name}\" {{ {body} }}"))?;
        println!("== {name}: L = {}", spec.body);
        for ((symbol, component), residual) in spec.body.euler_residuals()? {
            println!("   E[{}_{component}] = {residual}", symbol.as_str());
        }
        let verdict = zero_integral(&spec)?;
        println!("   total divergence: {}", verdict.value);
        if let Some(w) = verdict.witness {
            println!("   witness: residual value {} at the jet realized by {}", w.value, w.realization);
        }
    }
    Ok(())
}
