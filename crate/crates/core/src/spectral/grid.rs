//! Uniform periodic grids on `[−π, π)^n` and fields sampled on them.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::SpectralError;

/// A uniform grid with `n` points per axis on the torus `[−π, π)^dim`.
/// Transform plans are shared, so cloning is cheap.
#[derive(Clone)]
pub struct Grid {
    dim: usize,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grid({}^{})", self.n, self.dim)
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n == other.n
    }
}

impl Grid {
    /// `dim ∈ {1, 2, 3}` and `n` a power of two, at least 8.
    pub fn new(dim: usize, n: usize) -> Result<Grid, SpectralError> {
        if !(1..=3).contains(&dim) {
            return Err(SpectralError::Dimension(format!("grids support dimensions 1 to 3, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(SpectralError::Resolution(n));
        }
        let mut planner = FftPlanner::new();
        Ok(Grid {
            dim,
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    /// The default resolution for a dimension: 1024, 256² or 64³.
    pub fn default_for(dim: usize) -> Result<Grid, SpectralError> {
        Grid::new(dim, default_resolution(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of points.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Coordinate of grid index `k` along any axis.
    pub fn coordinate(&self, k: usize) -> f64 {
        -std::f64::consts::PI + k as f64 * self.spacing()
    }

    /// Per-axis indices of flat index `idx` (last axis fastest).
    pub fn unflatten(&self, mut idx: usize) -> [usize; 3] {
        let mut out = [0; 3];
        for a in (0..self.dim).rev() {
            out[a] = idx % self.n;
            idx /= self.n;
        }
        out
    }

    pub fn flatten(&self, ks: &[usize]) -> usize {
        ks.iter().take(self.dim).fold(0, |acc, &k| acc * self.n + k)
    }

    /// Physical point of flat index `idx` (unused axes are 0).
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let ks = self.unflatten(idx);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.coordinate(ks[a]);
        }
        x
    }

    /// Signed integer frequency of FFT bin `k`; the Nyquist bin maps to
    /// `−n/2`.
    pub fn frequency(&self, k: usize) -> f64 {
        if k < self.n / 2 {
            k as f64
        } else {
            k as f64 - self.n as f64
        }
    }

    /// Frequency vector of flat spectral index `idx`.
    pub fn frequencies(&self, idx: usize) -> [f64; 3] {
        let ks = self.unflatten(idx);
        let mut xi = [0.0; 3];
        for a in 0..self.dim {
            xi[a] = self.frequency(ks[a]);
        }
        xi
    }

    /// Whether flat spectral index `idx` touches a Nyquist bin on `axis`.
    pub fn is_nyquist(&self, idx: usize, axis: usize) -> bool {
        self.unflatten(idx)[axis] == self.n / 2
    }

    /// Flat index of the frequency `−ξ`.
    pub fn negated(&self, idx: usize) -> usize {
        let ks = self.unflatten(idx);
        let mut out = [0; 3];
        for a in 0..self.dim {
            out[a] = (self.n - ks[a]) % self.n;
        }
        self.flatten(&out[..self.dim])
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len(), self.len(), "field length does not match grid");
        let n = self.n;
        let mut line = vec![Complex64::default(); n];
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            if stride == 1 {
                plan.process(data);
                continue;
            }
            let block = stride * n;
            for start in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (k, slot) in line.iter_mut().enumerate() {
                        *slot = data[base + k * stride];
                    }
                    plan.process(&mut line);
                    for (k, v) in line.iter().enumerate() {
                        data[base + k * stride] = *v;
                    }
                }
            }
        }
    }

    /// Unnormalized forward transform in place.
    pub fn fft(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// Inverse transform in place, normalized so `ifft ∘ fft = id`.
    pub fn ifft(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
        let s = 1.0 / self.len() as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }
}

pub fn default_resolution(dim: usize) -> usize {
    match dim {
        1 => 1024,
        2 => 256,
        _ => 64,
    }
}

/// Samples of a scalar function on a grid, with the symbol it stands for
/// and whether it is real-valued.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    grid: Grid,
    pub data: Vec<Complex64>,
    pub symbol: String,
    pub real: bool,
}

impl GridField {
    pub fn zeros(grid: &Grid, symbol: &str) -> GridField {
        GridField {
            grid: grid.clone(),
            data: vec![Complex64::default(); grid.len()],
            symbol: symbol.to_string(),
            real: true,
        }
    }

    pub fn from_real_fn<F: Fn(&[f64; 3]) -> f64>(grid: &Grid, symbol: &str, f: F) -> GridField {
        let data = (0..grid.len()).map(|i| Complex64::new(f(&grid.point(i)), 0.0)).collect();
        GridField {
            grid: grid.clone(),
            data,
            symbol: symbol.to_string(),
            real: true,
        }
    }

    pub fn from_complex_fn<F: Fn(&[f64; 3]) -> Complex64>(grid: &Grid, symbol: &str, f: F) -> GridField {
        let data = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        GridField {
            grid: grid.clone(),
            data,
            symbol: symbol.to_string(),
            real: false,
        }
    }

    pub fn from_real_values(grid: &Grid, symbol: &str, values: &[f64]) -> GridField {
        assert_eq!(values.len(), grid.len());
        GridField {
            grid: grid.clone(),
            data: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            symbol: symbol.to_string(),
            real: true,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn renamed(mut self, symbol: &str) -> GridField {
        self.symbol = symbol.to_string();
        self
    }

    /// Unnormalized discrete Fourier coefficients.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut s = self.data.clone();
        self.grid.fft(&mut s);
        s
    }

    /// Field with the given spectrum; real-flagged results drop the
    /// (round-off) imaginary part.
    pub fn from_spectrum(grid: &Grid, symbol: &str, mut spectrum: Vec<Complex64>, real: bool) -> GridField {
        grid.ifft(&mut spectrum);
        if real {
            for v in spectrum.iter_mut() {
                v.im = 0.0;
            }
        }
        GridField {
            grid: grid.clone(),
            data: spectrum,
            symbol: symbol.to_string(),
            real,
        }
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.data.iter().map(|c| c.re).collect()
    }

    /// Trapezoid (= rectangle, periodic) rule.
    pub fn integral(&self) -> Complex64 {
        self.data.iter().sum::<Complex64>() * self.grid.cell_volume()
    }

    pub fn mean(&self) -> Complex64 {
        self.data.iter().sum::<Complex64>() / self.grid.len() as f64
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        let s: f64 = self.data.iter().map(|c| c.norm().powf(p)).sum();
        (s * self.grid.cell_volume()).powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        self.lp_norm(2.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &GridField, f: impl Fn(Complex64, Complex64) -> Complex64) -> GridField {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        GridField {
            grid: self.grid.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
            symbol: self.symbol.clone(),
            real: self.real && other.real,
        }
    }

    pub fn add(&self, other: &GridField) -> GridField {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridField) -> GridField {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &GridField) -> GridField {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> GridField {
        self.map(|z| z * c)
    }

    /// Pointwise image; stays real-flagged only if every value is real.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridField {
        let data: Vec<Complex64> = self.data.iter().map(|z| f(*z)).collect();
        GridField {
            grid: self.grid.clone(),
            real: self.real && data.iter().all(|z| z.im == 0.0),
            data,
            symbol: self.symbol.clone(),
        }
    }

    pub fn conj(&self) -> GridField {
        self.map(|z| z.conj())
    }

    /// `max |f − g| / max(|f|, tiny)`.
    pub fn relative_max_error(&self, reference: &GridField) -> f64 {
        let diff = self.sub(reference).max_abs();
        diff / reference.max_abs().max(f64::MIN_POSITIVE)
    }

    /// `‖f − g‖₂ / ‖g‖₂`.
    pub fn relative_l2_error(&self, reference: &GridField) -> f64 {
        self.sub(reference).l2_norm() / reference.l2_norm().max(f64::MIN_POSITIVE)
    }

    /// Largest `|f̂(ξ) − conj f̂(−ξ)|` relative to the largest coefficient;
    /// zero for exactly real data.
    pub fn conjugate_symmetry_error(&self) -> f64 {
        let s = self.spectrum();
        let top = s.iter().map(|c| c.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        (0..s.len())
            .map(|i| (s[i] - s[self.grid.negated(i)].conj()).norm())
            .fold(0.0, f64::max)
            / top
    }
}

/// Pointwise Euclidean inner product `Σ_i u_i v_i` of two vector fields.
pub fn dot(u: &[GridField], v: &[GridField]) -> GridField {
    assert_eq!(u.len(), v.len());
    let mut out = u[0].mul(&v[0]);
    for (a, b) in u.iter().zip(v).skip(1) {
        out = out.add(&a.mul(b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transforms_round_trip() {
        for dim in 1..=3 {
            let g = Grid::new(dim, 16).unwrap();
            let f = GridField::from_real_fn(&g, "f", |x| (x[0] * 2.0).sin() + (x[1] - x[2]).cos() * 0.3);
            let back = GridField::from_spectrum(&g, "f", f.spectrum(), true);
            assert!(back.relative_max_error(&f) < 1e-14);
            assert!(f.conjugate_symmetry_error() < 1e-12);
        }
    }

    #[test]
    fn plane_wave_lands_in_one_bin() {
        let g = Grid::new(2, 16).unwrap();
        let f = GridField::from_complex_fn(&g, "e", |x| Complex64::new(0.0, 3.0 * x[0] - 2.0 * x[1]).exp());
        let s = f.spectrum();
        let (idx, top) = s
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap();
        assert_eq!(&g.frequencies(idx)[..2], &[3.0, -2.0]);
        assert!((top.norm() - g.len() as f64).abs() < 1e-9);
        assert!(Grid::new(2, 12).is_err());
        assert!(Grid::new(4, 16).is_err());
    }

    #[test]
    fn integral_of_constant_is_volume() {
        let g = Grid::new(3, 8).unwrap();
        let one = GridField::from_real_fn(&g, "1", |_| 1.0);
        let vol = (2.0 * std::f64::consts::PI).powi(3);
        assert!((one.integral().re - vol).abs() < 1e-10);
    }
}
