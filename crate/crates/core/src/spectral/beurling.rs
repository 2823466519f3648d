//! Planar complex analysis on the grid: the Beurling transform, Wirtinger
//! derivatives, Jacobians and Hessian determinants, and the commutator
//! operator `K_b f = conj((S b − b S) conj(S f))`.

use num_complex::Complex64;

use super::fields::random_trig_field;
use super::grid::{Grid, GridField};
use super::multipliers::{apply_multiplier, partial};
use super::SpectralError;

fn require_plane(g: &Grid) -> Result<(), SpectralError> {
    if g.dim() == 2 {
        Ok(())
    } else {
        Err(SpectralError::Dimension(format!("planar operator on a {}-dimensional grid", g.dim())))
    }
}

/// Frequency `ξ₁ + iξ₂` with Nyquist components dropped (the convention
/// used for first derivatives, so that `S(u_z̄) = u_z` holds bin by bin).
fn planar_frequency(g: &Grid, xi: &[f64; 3], idx: usize) -> Complex64 {
    let a = if g.is_nyquist(idx, 0) { 0.0 } else { xi[0] };
    let b = if g.is_nyquist(idx, 1) { 0.0 } else { xi[1] };
    Complex64::new(a, b)
}

/// Beurling transform `S`, multiplier `ξ̄/ξ` (0 on the mean mode).
pub fn beurling(f: &GridField) -> Result<GridField, SpectralError> {
    let g = f.grid().clone();
    require_plane(&g)?;
    Ok(apply_multiplier(f, false, |xi, i| {
        let z = planar_frequency(&g, xi, i);
        if z.norm_sqr() == 0.0 {
            Complex64::default()
        } else {
            z.conj() / z
        }
    }))
}

/// `(u_z, u_z̄) = (½(∂_x − i∂_y)u, ½(∂_x + i∂_y)u)`.
pub fn wirtinger(u: &GridField) -> Result<(GridField, GridField), SpectralError> {
    require_plane(u.grid())?;
    let ux = partial(u, 0)?;
    let uy = partial(u, 1)?;
    let iuy = uy.map(|c| c * Complex64::new(0.0, 1.0));
    Ok((ux.sub(&iuy).scale(0.5), ux.add(&iuy).scale(0.5)))
}

fn determinant(m: &[Vec<Complex64>]) -> Complex64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!("grids have dimension at most 3"),
    }
}

fn pointwise_det(g: &Grid, entries: &[Vec<GridField>], symbol: &str) -> GridField {
    let n = entries.len();
    let mut out = GridField::zeros(g, symbol);
    out.real = entries.iter().flatten().all(|f| f.real);
    for p in 0..g.len() {
        let m: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| entries[i][j].data[p]).collect()).collect();
        out.data[p] = determinant(&m);
    }
    out
}

/// `det(∂_j u_i)` for a map with as many components as dimensions.
pub fn jacobian(u: &[GridField]) -> Result<GridField, SpectralError> {
    let g = u[0].grid().clone();
    if u.len() != g.dim() {
        return Err(SpectralError::Arity {
            expected: g.dim(),
            found: u.len(),
        });
    }
    let grads: Vec<Vec<GridField>> = u
        .iter()
        .map(|c| (0..g.dim()).map(|j| partial(c, j)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    Ok(pointwise_det(&g, &grads, "J"))
}

/// `det(∂_i∂_j f)`.
pub fn hessian_det(f: &GridField) -> Result<GridField, SpectralError> {
    let g = f.grid().clone();
    let grad: Vec<GridField> = (0..g.dim()).map(|j| partial(f, j)).collect::<Result<_, _>>()?;
    let hess: Vec<Vec<GridField>> = grad
        .iter()
        .map(|c| (0..g.dim()).map(|j| partial(c, j)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    Ok(pointwise_det(&g, &hess, "H"))
}

/// `K_b f = conj(S(b g) − b S g)` with `g = conj(S f)`.
pub fn kb_apply(b: &GridField, f: &GridField) -> Result<GridField, SpectralError> {
    let g = beurling(f)?.conj();
    let commutator = beurling(&b.mul(&g))?.sub(&b.mul(&beurling(&g)?));
    Ok(commutator.conj())
}

/// `∫ f conj(g)`.
pub fn inner(f: &GridField, g: &GridField) -> Complex64 {
    f.mul(&g.conj()).integral()
}

/// Relative gap between `∫ b(|Sf|² − |f|²)` and `∫ f conj(K_b f)`. The
/// mean of `f` is removed first (`S` annihilates it).
pub fn kb_identity_check(b: &GridField, f: &GridField) -> Result<f64, SpectralError> {
    let m = f.mean();
    let f = f.map(|z| z - m);
    let sf = beurling(&f)?;
    let density = sf.map(|z| Complex64::new(z.norm_sqr(), 0.0)).sub(&f.map(|z| Complex64::new(z.norm_sqr(), 0.0)));
    let lhs = b.mul(&density).integral();
    let rhs = f.mul(&kb_apply(b, &f)?.conj()).integral();
    Ok((lhs - rhs).norm() / (lhs.norm() + rhs.norm() + f64::MIN_POSITIVE))
}

fn mean_free(f: &GridField) -> GridField {
    let m = f.mean();
    f.map(|z| z - m)
}

/// Relative gap in `⟨K_b f, g⟩ = ⟨f, K_b g⟩` on the mean-free parts of `f`
/// and `g`. On the torus `S` annihilates the mean mode, so `K_b` is
/// self-adjoint on mean-free fields, the counterpart of `L²(ℂ)`.
pub fn kb_self_adjoint_error(b: &GridField, f: &GridField, g: &GridField) -> Result<f64, SpectralError> {
    let (f, g) = (&mean_free(f), &mean_free(g));
    let lhs = inner(&kb_apply(b, f)?, g);
    let rhs = inner(f, &kb_apply(b, g)?);
    Ok((lhs - rhs).norm() / (lhs.norm() + rhs.norm() + f64::MIN_POSITIVE))
}

/// Power-iteration estimate of `‖K_b‖_{L²→L²}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BmosEstimate {
    /// Last value of the nondecreasing sequence `‖K_b x_k‖`.
    pub value: f64,
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Power iteration on the self-adjoint `K_b` from a seeded start, stopping
/// at relative stagnation `1e−8`. The sequence is nondecreasing, so the
/// result bounds the norm of the discretized operator from below.
pub fn bmos_norm(b: &GridField, max_iterations: usize, seed: u64) -> Result<BmosEstimate, SpectralError> {
    let g = b.grid().clone();
    require_plane(&g)?;
    let start = random_trig_field(&g, "x", (g.n() / 8).max(1) as u32, seed);
    let mut x = mean_free(&start);
    x = x.scale(1.0 / x.l2_norm());
    let mut history = Vec::new();
    let mut converged = false;
    for _ in 0..max_iterations {
        // Compressed to mean-free fields, where K_b is self-adjoint.
        let y = mean_free(&kb_apply(b, &x)?);
        let norm = y.l2_norm();
        let prev = history.last().copied();
        history.push(norm);
        if norm == 0.0 {
            converged = true;
            break;
        }
        x = y.scale(1.0 / norm);
        if let Some(p) = prev {
            if (norm - p).abs() <= 1e-8 * norm {
                converged = true;
                break;
            }
        }
    }
    Ok(BmosEstimate {
        value: history.last().copied().unwrap_or(0.0),
        history,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::fields::BumpSpec;

    #[test]
    fn plane_wave_eigenvalues() {
        let g = Grid::new(2, 16).unwrap();
        let ex = GridField::from_complex_fn(&g, "e", |x| Complex64::new(0.0, x[0]).exp());
        assert!(beurling(&ex).unwrap().relative_max_error(&ex) < 1e-13);
        let ey = GridField::from_complex_fn(&g, "e", |x| Complex64::new(0.0, x[1]).exp());
        assert!(beurling(&ey).unwrap().relative_max_error(&ey.scale(-1.0)) < 1e-13);
    }

    #[test]
    fn identity_map_has_unit_jacobian_on_plateau() {
        let g = Grid::new(2, 256).unwrap();
        let cut = BumpSpec::centered(2, 2.5, 1.0);
        let c = cut.sample(&g, "c");
        let u = [
            c.mul(&GridField::from_real_fn(&g, "x", |x| x[0])),
            c.mul(&GridField::from_real_fn(&g, "y", |x| x[1])),
        ];
        let j = jacobian(&u).unwrap();
        for i in 0..g.len() {
            let x = g.point(i);
            if x[0].hypot(x[1]) < 0.5 {
                assert!((j.data[i].re - 1.0).abs() < 1e-5, "{}", j.data[i]);
            }
        }
    }

    #[test]
    fn constant_symbol_commutator_vanishes() {
        let g = Grid::new(2, 32).unwrap();
        let b = GridField::from_real_fn(&g, "b", |_| 2.5);
        let f = BumpSpec::centered(2, 1.5, 0.5).with_band(2, 4).sample(&g, "f");
        assert!(kb_apply(&b, &f).unwrap().max_abs() < 1e-12);
        let est = bmos_norm(&b, 10, 1).unwrap();
        assert!(est.value < 1e-12);
    }
}
