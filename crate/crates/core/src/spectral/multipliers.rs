//! Fourier multipliers: derivatives, Riesz transforms and the Leray
//! projection. Homogeneous multipliers of degree 0 or less send the mean
//! mode to zero (the Leray projection keeps it).

use num_complex::Complex64;

use super::grid::{Grid, GridField};
use super::SpectralError;
use crate::multiindex::MultiIndex;

/// Applies `m(ξ)` (given the frequency vector and flat bin index) to `f`.
/// `keeps_real` states that `m(−ξ) = conj m(ξ)`, so real input stays real.
pub fn apply_multiplier<M>(f: &GridField, keeps_real: bool, m: M) -> GridField
where
    M: Fn(&[f64; 3], usize) -> Complex64,
{
    let g = f.grid();
    let mut s = f.spectrum();
    for (i, c) in s.iter_mut().enumerate() {
        *c *= m(&g.frequencies(i), i);
    }
    GridField::from_spectrum(g, &f.symbol, s, f.real && keeps_real)
}

/// `f` with every Nyquist bin removed (the band-limited part that all
/// multipliers treat consistently).
pub fn without_nyquist(f: &GridField) -> GridField {
    let g = f.grid();
    apply_multiplier(f, true, |_, i| {
        if (0..g.dim()).any(|a| g.is_nyquist(i, a)) {
            Complex64::default()
        } else {
            Complex64::new(1.0, 0.0)
        }
    })
}

fn check_axis(g: &Grid, j: usize) -> Result<(), SpectralError> {
    if j >= g.dim() {
        Err(SpectralError::Dimension(format!("axis {j} out of range for dimension {}", g.dim())))
    } else {
        Ok(())
    }
}

/// Multiplier `(iξ)^α` at one bin; odd derivatives vanish on Nyquist bins.
pub fn derivative_symbol(g: &Grid, alpha: &MultiIndex, xi: &[f64; 3], idx: usize) -> Complex64 {
    let mut m = Complex64::new(1.0, 0.0);
    for a in 0..g.dim() {
        let e = alpha.get(a);
        if e == 0 {
            continue;
        }
        if e % 2 == 1 && g.is_nyquist(idx, a) {
            return Complex64::default();
        }
        m *= Complex64::new(0.0, xi[a]).powu(e);
    }
    m
}

/// `∂^α f`.
pub fn spectral_derivative(f: &GridField, alpha: &MultiIndex) -> Result<GridField, SpectralError> {
    let g = f.grid().clone();
    if alpha.dim() != g.dim() {
        return Err(SpectralError::Dimension(format!(
            "multi-index of dimension {} on a {}-dimensional grid",
            alpha.dim(),
            g.dim()
        )));
    }
    Ok(apply_multiplier(f, true, |xi, i| derivative_symbol(&g, alpha, xi, i)))
}

/// `∂_j f` for a 0-based axis.
pub fn partial(f: &GridField, j: usize) -> Result<GridField, SpectralError> {
    check_axis(f.grid(), j)?;
    spectral_derivative(f, &MultiIndex::unit(f.grid().dim(), j).expect("axis checked"))
}

fn norm2(xi: &[f64; 3]) -> f64 {
    xi.iter().map(|x| x * x).sum()
}

/// Riesz transform `R_j`, multiplier `−iξ_j/|ξ|` (0 at `ξ = 0`).
pub fn riesz(f: &GridField, j: usize) -> Result<GridField, SpectralError> {
    let g = f.grid().clone();
    check_axis(&g, j)?;
    Ok(apply_multiplier(f, true, |xi, i| {
        let r = norm2(xi).sqrt();
        if r == 0.0 || g.is_nyquist(i, j) {
            Complex64::default()
        } else {
            Complex64::new(0.0, -xi[j] / r)
        }
    }))
}

/// `−Δ` multiplier `|ξ|²`.
pub fn neg_laplacian(f: &GridField) -> GridField {
    apply_multiplier(f, true, |xi, _| Complex64::new(norm2(xi), 0.0))
}

/// `Σ_j ∂_j u_j`.
pub fn divergence(u: &[GridField]) -> Result<GridField, SpectralError> {
    let g = u[0].grid();
    if u.len() != g.dim() {
        return Err(SpectralError::Arity {
            expected: g.dim(),
            found: u.len(),
        });
    }
    let mut out = partial(&u[0], 0)?;
    for (j, c) in u.iter().enumerate().skip(1) {
        out = out.add(&partial(c, j)?);
    }
    Ok(out)
}

pub fn gradient(f: &GridField) -> Result<Vec<GridField>, SpectralError> {
    (0..f.grid().dim()).map(|j| partial(f, j)).collect()
}

/// Leray projection `I + R ⊗ R`, i.e. `δ_{jk} − ξ_jξ_k/|ξ|²`, identity on
/// the mean mode.
pub fn leray_project(u: &[GridField]) -> Result<Vec<GridField>, SpectralError> {
    let g = u[0].grid().clone();
    let n = g.dim();
    if u.len() != n {
        return Err(SpectralError::Arity {
            expected: n,
            found: u.len(),
        });
    }
    let spectra: Vec<Vec<Complex64>> = u.iter().map(|c| c.spectrum()).collect();
    let mut out: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); g.len()]; n];
    for i in 0..g.len() {
        let mut xi = g.frequencies(i);
        // Drop Nyquist components so the projector stays real-symmetric.
        for (a, x) in xi.iter_mut().enumerate().take(n) {
            if g.is_nyquist(i, a) {
                *x = 0.0;
            }
        }
        let r2 = norm2(&xi);
        for j in 0..n {
            let mut acc = spectra[j][i];
            if r2 > 0.0 {
                let dot: Complex64 = (0..n).map(|k| spectra[k][i] * xi[k]).sum();
                acc -= dot * (xi[j] / r2);
            }
            out[j][i] = acc;
        }
    }
    Ok(out
        .into_iter()
        .zip(u)
        .map(|(s, c)| GridField::from_spectrum(&g, &c.symbol, s, c.real))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::fields::BumpSpec;

    #[test]
    fn plane_wave_derivative() {
        let g = Grid::new(1, 32).unwrap();
        let e = GridField::from_complex_fn(&g, "e", |x| Complex64::new(0.0, x[0]).exp());
        let d = partial(&e, 0).unwrap();
        let expect = e.map(|z| z * Complex64::new(0.0, 1.0));
        assert!(d.relative_max_error(&expect) < 1e-13);
    }

    #[test]
    fn leray_kills_gradients_and_divergence() {
        let g = Grid::new(2, 64).unwrap();
        let psi = BumpSpec::centered(2, 1.5, 0.5).with_band(3, 11).sample(&g, "psi");
        let grad = gradient(&psi).unwrap();
        let p = leray_project(&grad).unwrap();
        assert!(p[0].max_abs() < 1e-12 * grad[0].max_abs());

        let u: Vec<GridField> = (0..2)
            .map(|k| BumpSpec::centered(2, 1.5, 0.5).with_band(3, 20 + k).sample(&g, "u"))
            .collect();
        let p = leray_project(&u).unwrap();
        let div = divergence(&p).unwrap();
        assert!(div.max_abs() < 1e-12 * partial(&p[0], 0).unwrap().max_abs());
        let pp = leray_project(&p).unwrap();
        assert!(pp[1].relative_max_error(&p[1]) < 1e-12);
    }

    #[test]
    fn riesz_squares_sum_to_minus_identity() {
        let g = Grid::new(2, 32).unwrap();
        let f = BumpSpec::centered(2, 1.5, 0.5).with_band(2, 3).sample(&g, "f");
        let f0 = without_nyquist(&f.map(|z| z - f.mean()));
        let mut s = riesz(&riesz(&f0, 0).unwrap(), 0).unwrap();
        s = s.add(&riesz(&riesz(&f0, 1).unwrap(), 1).unwrap());
        // Σ R_j² = −I away from the mean and Nyquist modes.
        let err = s.add(&f0).max_abs() / f0.max_abs();
        assert!(err < 1e-13, "{err}");
    }
}
