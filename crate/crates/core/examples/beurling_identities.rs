//! Planar Beurling-transform identities on a random field: isometry,
//! `S(u_z̄) = u_z`, the Wirtinger form of the Jacobian, and the commutator
//! `K_b` with its norm estimate.

use num_complex::Complex64;

use cclab::spectral::beurling::{inner, kb_self_adjoint_error};
use cclab::spectral::fields::random_spectral_field;
use cclab::spectral::{beurling, bmos_norm, jacobian, kb_identity_check, wirtinger, Grid, GridField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Grid::new(2, 128)?;
    let f = random_spectral_field(&g, "f", 12, 1);
    let sf = beurling(&f)?;
    println!("| ‖Sf‖ − ‖f‖ | / ‖f‖ = {:.1e}", (sf.l2_norm() - f.l2_norm()).abs() / f.l2_norm());

    let (uz, uzbar) = wirtinger(&f)?;
    println!("S(u_z̄) vs u_z: {:.1e}", beurling(&uzbar)?.relative_max_error(&uz));

    let u = [f.clone(), random_spectral_field(&g, "f", 12, 2)];
    let z = u[0].add(&u[1].map(|c| c * Complex64::i()));
    let (a, b) = wirtinger(&z)?;
    let sq = |h: &GridField| h.map(|c| Complex64::new(c.norm_sqr(), 0.0));
    println!("Ju vs |u_z|² − |u_z̄|²: {:.1e}", jacobian(&u)?.relative_max_error(&sq(&a).sub(&sq(&b))));

    let bfield = random_spectral_field(&g, "b", 4, 3).scale(0.5);
    let h = random_spectral_field(&g, "h", 12, 4);
    println!("K_b pairing identity: {:.1e}", kb_identity_check(&bfield, &f)?);
    println!("K_b self-adjointness: {:.1e}", kb_self_adjoint_error(&bfield, &f, &h)?);
    println!("⟨f, f⟩ = {:.4}", inner(&f, &f).re);
    let est = bmos_norm(&bfield, 60, 5)?;
    println!(
        "‖K_b‖ ≈ {:.6} after {} iterations (converged: {})",
        est.value,
        est.history.len(),
        est.converged
    );
    Ok(())
}
