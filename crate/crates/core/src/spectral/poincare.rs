//! Higher-order Poincaré check on grid-aligned cubes: build the polynomial
//! of degree `k − 1` whose derivative averages over the cube match those of
//! `f`, and compare the remainder with the `k`-th derivatives.

use super::grid::GridField;
use super::multipliers::spectral_derivative;
use super::SpectralError;
use crate::multiindex::{enumerate, EnumerationMode, MultiIndex};

/// A cube of `side` grid points per axis starting at grid index `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cube {
    pub origin: [usize; 3],
    pub side: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoincareResult {
    /// Coefficients of `P = Σ c_β (x − x_Q)^β`, `x_Q` the cube's center.
    pub polynomial: Vec<(MultiIndex, f64)>,
    /// `(⨍_Q |f − P|^p)^{1/p}`.
    pub numerator: f64,
    /// `ℓ^k (⨍_Q |∇^k f|^p)^{1/p}`, `ℓ` the side length.
    pub denominator: f64,
    /// `numerator / denominator` (0 when both vanish).
    pub ratio: f64,
}

fn cube_points(f: &GridField, cube: &Cube) -> Vec<usize> {
    let g = f.grid();
    let dim = g.dim();
    let mut out = Vec::new();
    let total = cube.side.pow(dim as u32);
    for t in 0..total {
        let mut rem = t;
        let mut ks = [0usize; 3];
        for a in (0..dim).rev() {
            ks[a] = cube.origin[a] + rem % cube.side;
            rem /= cube.side;
        }
        out.push(g.flatten(&ks[..dim]));
    }
    out
}

fn monomial(x: &[f64; 3], center: &[f64; 3], beta: &MultiIndex) -> f64 {
    (0..beta.dim()).map(|a| (x[a] - center[a]).powi(beta.get(a) as i32)).product()
}

/// `∂^α (x − c)^β` evaluated at `x`.
fn monomial_derivative(x: &[f64; 3], center: &[f64; 3], beta: &MultiIndex, alpha: &MultiIndex) -> f64 {
    let mut v = 1.0;
    for a in 0..beta.dim() {
        let (b, d) = (beta.get(a), alpha.get(a));
        if d > b {
            return 0.0;
        }
        let falling: f64 = (0..d).map(|i| (b - i) as f64).product();
        v *= falling * (x[a] - center[a]).powi((b - d) as i32);
    }
    v
}

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let factor = a[r][col] / a[col][col];
                if factor != 0.0 {
                    for c in col..n {
                        a[r][c] -= factor * a[col][c];
                    }
                    b[r] -= factor * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// A field with its derivatives up to order `k` precomputed, for checking
/// many cubes.
#[derive(Debug, Clone)]
pub struct PoincareField {
    field: GridField,
    k: u32,
    /// `∂^α f` for `|α| ≤ k − 1`, in enumeration order.
    lower: Vec<(MultiIndex, GridField)>,
    /// `|∇^k f|` pointwise.
    top: Vec<f64>,
}

impl PoincareField {
    pub fn new(f: &GridField, k: u32) -> Result<PoincareField, SpectralError> {
        if k == 0 {
            return Err(SpectralError::DegenerateCube("order k must be at least 1".into()));
        }
        let dim = f.grid().dim();
        let basis = enumerate(dim, k - 1, EnumerationMode::UpTo).map_err(|e| SpectralError::Dimension(e.to_string()))?;
        let lower = basis
            .into_iter()
            .map(|a| spectral_derivative(f, &a).map(|d| (a, d)))
            .collect::<Result<_, _>>()?;
        let top_idx = enumerate(dim, k, EnumerationMode::Exact).map_err(|e| SpectralError::Dimension(e.to_string()))?;
        let derivs: Vec<GridField> = top_idx.iter().map(|a| spectral_derivative(f, a)).collect::<Result<_, _>>()?;
        let top = (0..f.grid().len())
            .map(|i| derivs.iter().map(|d| d.data[i].re.powi(2)).sum::<f64>().sqrt())
            .collect();
        Ok(PoincareField {
            field: f.clone(),
            k,
            lower,
            top,
        })
    }

    /// Poincaré ratio with exponent `p` on `cube`.
    pub fn check(&self, cube: &Cube, p: f64) -> Result<PoincareResult, SpectralError> {
        let f = &self.field;
        let g = f.grid();
        let dim = g.dim();
        if cube.side < 2 || (0..dim).any(|a| cube.origin[a] + cube.side > g.n()) {
            return Err(SpectralError::DegenerateCube(format!(
                "side {} at {:?} does not fit a grid of {} points",
                cube.side,
                &cube.origin[..dim],
                g.n()
            )));
        }
        let points = cube_points(f, cube);
        let count = points.len() as f64;
        let h = g.spacing();
        let mut center = [0.0; 3];
        for (a, c) in center.iter_mut().enumerate().take(dim) {
            *c = g.coordinate(cube.origin[a]) + 0.5 * (cube.side - 1) as f64 * h;
        }
        let avg = |vals: &dyn Fn(usize) -> f64| points.iter().map(|&i| vals(i)).sum::<f64>() / count;

        // Unknowns and conditions are both indexed by |β|, |α| ≤ k − 1.
        let mut matrix = Vec::with_capacity(self.lower.len());
        let mut rhs = Vec::with_capacity(self.lower.len());
        for (alpha, d) in &self.lower {
            rhs.push(avg(&|i| d.data[i].re));
            matrix.push(
                self.lower
                    .iter()
                    .map(|(beta, _)| avg(&|i| monomial_derivative(&g.point(i), &center, beta, alpha)))
                    .collect(),
            );
        }
        let coeffs = solve(matrix, rhs).ok_or_else(|| SpectralError::DegenerateCube("singular moment system".into()))?;
        let polynomial: Vec<(MultiIndex, f64)> = self.lower.iter().map(|(b, _)| *b).zip(coeffs).collect();

        let remainder = |i: usize| {
            let x = g.point(i);
            let pv: f64 = polynomial.iter().map(|(b, c)| c * monomial(&x, &center, b)).sum();
            (f.data[i].re - pv).abs().powf(p)
        };
        let numerator = avg(&remainder).powf(1.0 / p);
        let side_length = cube.side as f64 * h;
        let denominator = side_length.powi(self.k as i32) * avg(&|i| self.top[i].powf(p)).powf(1.0 / p);
        let ratio = if denominator == 0.0 {
            if numerator == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            numerator / denominator
        };
        Ok(PoincareResult {
            polynomial,
            numerator,
            denominator,
            ratio,
        })
    }
}

/// Poincaré ratio of order `k` and exponent `p` on `cube`.
pub fn poincare_check(f: &GridField, cube: &Cube, k: u32, p: f64) -> Result<PoincareResult, SpectralError> {
    PoincareField::new(f, k)?.check(cube, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::fields::BumpSpec;
    use crate::spectral::grid::Grid;

    #[test]
    fn constants_and_linear_functions_are_reproduced() {
        let g = Grid::new(2, 256).unwrap();
        let c = GridField::from_real_fn(&g, "c", |_| 2.0);
        let cube = Cube {
            origin: [120, 120, 0],
            side: 16,
        };
        let r = poincare_check(&c, &cube, 1, 2.0).unwrap();
        assert!((r.polynomial[0].1 - 2.0).abs() < 1e-12);
        assert!(r.numerator < 1e-12);

        // A linear function on the plateau of a wide cutoff.
        let cut = BumpSpec::centered(2, 3.0, 1.5).sample(&g, "c");
        let lin = cut.mul(&GridField::from_real_fn(&g, "l", |x| 1.0 + 2.0 * x[0] - x[1]));
        let r = poincare_check(&lin, &cube, 2, 2.0).unwrap();
        assert!(r.numerator < 1e-6, "{r:?}");
        assert!(poincare_check(&lin, &Cube { origin: [250, 0, 0], side: 8 }, 1, 2.0).is_err());
    }
}
