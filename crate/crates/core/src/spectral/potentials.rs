//! Potentials on the grid: the inverse Laplacian, the first-order operators
//! `C` (vector field ↦ antisymmetric potential) and `B` (potential ↦
//! divergence-free field) with `B ∘ C = −Δ` on divergence-free fields, the
//! gradient potential of curl-free fields, and the pressure identity for
//! incompressible flows.

use num_complex::Complex64;

use super::grid::GridField;
use super::multipliers::{apply_multiplier, divergence, partial};
use super::SpectralError;
use crate::criteria::pair_component;

fn sign(e: usize) -> f64 {
    if e.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Solves `−ΔT = u` for mean-free `u` (the mean mode of `T` is 0).
pub fn poisson_solve(u: &GridField) -> Result<GridField, SpectralError> {
    let mean = u.mean().norm();
    if mean > 1e-10 * u.max_abs().max(f64::MIN_POSITIVE) {
        return Err(SpectralError::NotMeanFree(mean));
    }
    Ok(apply_multiplier(u, true, |xi, _| {
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        if r2 == 0.0 {
            Complex64::default()
        } else {
            Complex64::new(1.0 / r2, 0.0)
        }
    }))
}

/// Componentwise [`poisson_solve`].
pub fn poisson_solve_vector(u: &[GridField]) -> Result<Vec<GridField>, SpectralError> {
    u.iter().map(poisson_solve).collect()
}

/// `C(T)_{ij} = (−1)^{i+j}(∂_j T_i − ∂_i T_j)` for `i < j`, one component
/// per pair in the order `(1,2), (1,3), …`.
pub fn potential_c(t: &[GridField]) -> Result<Vec<GridField>, SpectralError> {
    let g = t[0].grid().clone();
    let n = g.dim();
    if t.len() != n {
        return Err(SpectralError::Arity {
            expected: n,
            found: t.len(),
        });
    }
    let mut out = vec![GridField::zeros(&g, "Phi"); n * (n - 1) / 2];
    for i in 1..=n {
        for j in i + 1..=n {
            let d = partial(&t[i - 1], j - 1)?.sub(&partial(&t[j - 1], i - 1)?);
            out[pair_component(n, i, j) - 1] = d.scale(sign(i + j)).renamed("Phi");
        }
    }
    Ok(out)
}

/// `B(Φ)_j = Σ_{i<j} (−1)^{i+j} ∂_i Φ_{ij} + Σ_{i>j} (−1)^{i+j+1} ∂_i Φ_{ji}`,
/// which is divergence-free for every `Φ`.
pub fn potential_b(phi: &[GridField]) -> Result<Vec<GridField>, SpectralError> {
    let g = phi[0].grid().clone();
    let n = g.dim();
    let pairs = n * (n - 1) / 2;
    if phi.len() != pairs {
        return Err(SpectralError::Arity {
            expected: pairs,
            found: phi.len(),
        });
    }
    let mut out = Vec::with_capacity(n);
    for j in 1..=n {
        let mut acc = GridField::zeros(&g, "u");
        for i in 1..=n {
            if i == j {
                continue;
            }
            let (comp, s) = if i < j {
                (pair_component(n, i, j), sign(i + j))
            } else {
                (pair_component(n, j, i), sign(i + j + 1))
            };
            acc = acc.add(&partial(&phi[comp - 1], i - 1)?.scale(s));
        }
        out.push(acc);
    }
    Ok(out)
}

/// `∇Ψ`.
pub fn potential_gradient(psi: &GridField) -> Result<Vec<GridField>, SpectralError> {
    (0..psi.grid().dim()).map(|j| partial(psi, j)).collect()
}

/// Outcome of the pressure identity check.
#[derive(Debug, Clone)]
pub struct NsCheck {
    /// `max |div((u·∇)u) − Σ ∂_j u_i ∂_i u_j| / (max |∇u|)²`.
    pub error: f64,
    /// The pressure solving `−Δp = Σ ∂_j u_i ∂_i u_j`.
    pub pressure: GridField,
}

/// Checks `div((u·∇)u) = Σ_{i,j} ∂_j u_i ∂_i u_j` for divergence-free `u`
/// and returns the corresponding pressure.
pub fn ns_identity_check(u: &[GridField]) -> Result<NsCheck, SpectralError> {
    let g = u[0].grid().clone();
    let n = g.dim();
    let grads: Vec<Vec<GridField>> = u
        .iter()
        .map(|c| (0..n).map(|j| partial(c, j)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let grad_max = grads.iter().flatten().map(|f| f.max_abs()).fold(0.0, f64::max);
    let div = divergence(u)?.max_abs();
    if div > 1e-10 * grad_max.max(f64::MIN_POSITIVE) {
        return Err(SpectralError::NonSolenoidal(div / grad_max.max(f64::MIN_POSITIVE)));
    }
    // (u·∇)u_j = Σ_i u_i ∂_i u_j
    let mut lhs = GridField::zeros(&g, "lhs");
    for j in 0..n {
        let mut w = GridField::zeros(&g, "w");
        for i in 0..n {
            w = w.add(&u[i].mul(&grads[j][i]));
        }
        lhs = lhs.add(&partial(&w, j)?);
    }
    let mut rhs = GridField::zeros(&g, "rhs");
    for i in 0..n {
        for j in 0..n {
            rhs = rhs.add(&grads[i][j].mul(&grads[j][i]));
        }
    }
    let denom = (grad_max * grad_max).max(f64::MIN_POSITIVE);
    let error = lhs.sub(&rhs).max_abs() / denom;
    // The right side is a divergence, hence mean-free up to round-off.
    let m = rhs.mean();
    let pressure = poisson_solve(&rhs.map(|z| z - m))?.renamed("p");
    Ok(NsCheck { error, pressure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::fields::random_trig_field;
    use crate::spectral::grid::Grid;
    use crate::spectral::multipliers::{leray_project, neg_laplacian};

    #[test]
    fn plane_wave_poisson() {
        let g = Grid::new(2, 16).unwrap();
        let f = GridField::from_real_fn(&g, "f", |x| (2.0 * x[0] + x[1]).cos());
        let t = poisson_solve(&f).unwrap();
        assert!(t.relative_max_error(&f.scale(0.2)) < 1e-13);
        let c = GridField::from_real_fn(&g, "c", |x| 1.0 + x[0].cos());
        assert!(matches!(poisson_solve(&c), Err(SpectralError::NotMeanFree(_))));
    }

    #[test]
    fn b_after_c_is_minus_laplacian() {
        for dim in [2, 3] {
            let g = Grid::new(dim, if dim == 2 { 32 } else { 16 }).unwrap();
            let raw: Vec<GridField> = (0..dim).map(|k| random_trig_field(&g, "t", 3, 40 + k as u64)).collect();
            let t = leray_project(&raw).unwrap();
            let bc = potential_b(&potential_c(&t).unwrap()).unwrap();
            for k in 0..dim {
                assert!(bc[k].relative_max_error(&neg_laplacian(&t[k])) < 1e-12);
            }
            assert!(divergence(&bc).unwrap().max_abs() < 1e-10);
        }
    }

    #[test]
    fn shear_flow_pressure_identity_is_trivial() {
        let g = Grid::new(3, 16).unwrap();
        let u = vec![
            GridField::from_real_fn(&g, "u", |x| x[1].sin()),
            GridField::zeros(&g, "u"),
            GridField::zeros(&g, "u"),
        ];
        let c = ns_identity_check(&u).unwrap();
        assert!(c.error < 1e-14);
        assert!(c.pressure.max_abs() < 1e-14);
    }
}
