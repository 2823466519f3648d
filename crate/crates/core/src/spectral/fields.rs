//! Seeded test fields: smooth plateau cutoffs, random band-limited content,
//! Taylor-polynomial realizations of jet points, and the mollifier used by
//! the maximal-function estimator.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::{Grid, GridField};
use super::jet2::Real;
use crate::multiindex::MultiIndex;

/// The smooth step `t ↦ f(t)/(f(t)+f(1−t))` with `f(t) = exp(−1/t)` (the
/// profile of the standard mollifier): 0 for `t ≤ 0`, 1 for `t ≥ 1`.
pub fn smooth_step<T: Real>(t: T) -> T {
    let tv = t.value();
    if tv <= 0.0 {
        return T::constant(0.0);
    }
    if tv >= 1.0 {
        return T::constant(1.0);
    }
    let one = T::constant(1.0);
    let f = |s: T| (-(one / s)).exp();
    let a = f(t);
    let b = f(one - t);
    a / (a + b)
}

/// A radial cutoff equal to 1 on the ball of radius `plateau` and 0 outside
/// the ball of radius `radius`, both around `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub center: [f64; 3],
    pub plateau: f64,
    pub radius: f64,
}

impl Cutoff {
    pub fn new(center: [f64; 3], plateau: f64, radius: f64) -> Cutoff {
        assert!(0.0 < plateau && plateau < radius, "cutoff needs 0 < plateau < radius");
        Cutoff { center, plateau, radius }
    }

    /// Works on plain numbers and on [`super::jet2::Jet2`] coordinates.
    pub fn eval<T: Real>(&self, x: &[T; 3], dim: usize) -> T {
        let mut r2 = T::constant(0.0);
        for a in 0..dim {
            let d = x[a] - T::constant(self.center[a]);
            r2 = r2 + d * d;
        }
        let p2 = self.plateau * self.plateau;
        let s = (r2 - T::constant(p2)) / T::constant(self.radius * self.radius - p2);
        T::constant(1.0) - smooth_step(s)
    }

    pub fn value(&self, x: &[f64; 3], dim: usize) -> f64 {
        self.eval(x, dim)
    }

    pub fn field(&self, grid: &Grid, symbol: &str) -> GridField {
        GridField::from_real_fn(grid, symbol, |x| self.value(x, grid.dim()))
    }
}

/// A random smooth field: band-limited trigonometric content times a
/// plateau cutoff. With band 0 the content is the constant 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpSpec {
    pub dim: usize,
    pub center: [f64; 3],
    pub radius: f64,
    pub plateau: f64,
    pub band: u32,
    pub seed: u64,
}

impl BumpSpec {
    pub fn centered(dim: usize, radius: f64, plateau: f64) -> BumpSpec {
        BumpSpec {
            dim,
            center: [0.0; 3],
            radius,
            plateau,
            band: 0,
            seed: 0,
        }
    }

    pub fn with_center(mut self, center: [f64; 3]) -> BumpSpec {
        self.center = center;
        self
    }

    pub fn with_band(mut self, band: u32, seed: u64) -> BumpSpec {
        self.band = band;
        self.seed = seed;
        self
    }

    pub fn cutoff(&self) -> Cutoff {
        Cutoff::new(self.center, self.plateau, self.radius)
    }

    /// The random content, a real trigonometric polynomial.
    pub fn content(&self) -> TrigPolynomial {
        if self.band == 0 {
            return TrigPolynomial::constant(self.dim, 1.0);
        }
        TrigPolynomial::random(self.dim, self.band, self.seed).shifted(self.center)
    }

    pub fn sample(&self, grid: &Grid, symbol: &str) -> GridField {
        self.cutoff().field(grid, symbol).mul(&self.content().field(grid, symbol))
    }
}

/// `Σ_k (a_k cos(k·(x−s)) + b_k sin(k·(x−s)))` over integer `k` with
/// `max |k_j| ≤ band`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    dim: usize,
    shift: [f64; 3],
    modes: Vec<([i32; 3], f64, f64)>,
}

impl TrigPolynomial {
    pub fn constant(dim: usize, c: f64) -> TrigPolynomial {
        TrigPolynomial {
            dim,
            shift: [0.0; 3],
            modes: vec![([0; 3], c, 0.0)],
        }
    }

    /// Uniform coefficients in `[−1, 1]`, normalized so the RMS value is
    /// about one.
    pub fn random(dim: usize, band: u32, seed: u64) -> TrigPolynomial {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = band as i32;
        let mut modes = Vec::new();
        for k0 in -b..=b {
            for k1 in if dim > 1 { -b..=b } else { 0..=0 } {
                for k2 in if dim > 2 { -b..=b } else { 0..=0 } {
                    let a = rng.gen_range(-1.0..=1.0);
                    let s = rng.gen_range(-1.0..=1.0);
                    modes.push(([k0, k1, k2], a, s));
                }
            }
        }
        let norm = (modes.len() as f64 / 3.0).sqrt().max(1.0);
        for m in &mut modes {
            m.1 /= norm;
            m.2 /= norm;
        }
        TrigPolynomial {
            dim,
            shift: [0.0; 3],
            modes,
        }
    }

    pub fn shifted(mut self, shift: [f64; 3]) -> TrigPolynomial {
        self.shift = shift;
        self
    }

    pub fn band(&self) -> u32 {
        self.modes
            .iter()
            .flat_map(|(k, _, _)| k.iter().map(|c| c.unsigned_abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn eval<T: Real>(&self, x: &[T; 3]) -> T {
        let mut acc = T::constant(0.0);
        for (k, a, b) in &self.modes {
            let mut phase = T::constant(0.0);
            for d in 0..self.dim {
                if k[d] != 0 {
                    phase = phase + (x[d] - T::constant(self.shift[d])) * T::constant(k[d] as f64);
                }
            }
            acc = acc + phase.cos() * T::constant(*a) + phase.sin() * T::constant(*b);
        }
        acc
    }

    /// Samples on a grid; synthesized spectrally (exactly) when the band fits
    /// below the Nyquist frequency.
    pub fn field(&self, grid: &Grid, symbol: &str) -> GridField {
        let n = grid.n();
        if 2 * self.band() as usize >= n || grid.dim() != self.dim {
            return GridField::from_real_fn(grid, symbol, |x| self.eval(x));
        }
        // cos/sin modes as two conjugate exponentials; grid points start at
        // −π, hence the (−1)^{Σk} factor.
        let mut spectrum = vec![Complex64::default(); grid.len()];
        let len = grid.len() as f64;
        for (k, a, b) in &self.modes {
            let mut dot = 0.0;
            let mut sum = 0i64;
            let mut pos = [0usize; 3];
            let mut neg = [0usize; 3];
            for d in 0..self.dim {
                dot += k[d] as f64 * self.shift[d];
                sum += k[d] as i64;
                pos[d] = k[d].rem_euclid(n as i32) as usize;
                neg[d] = (-k[d]).rem_euclid(n as i32) as usize;
            }
            let sign = if sum % 2 == 0 { 1.0 } else { -1.0 };
            let phase = Complex64::from_polar(1.0, -dot);
            let c = Complex64::new(*a, -*b) * phase * (0.5 * len * sign);
            spectrum[grid.flatten(&pos[..self.dim])] += c;
            spectrum[grid.flatten(&neg[..self.dim])] += c.conj();
        }
        GridField::from_spectrum(grid, symbol, spectrum, true)
    }
}

/// Seeded random real field with independent uniform Fourier coefficients
/// on the bins `max |k_j| ≤ band` (mean removed), built directly in
/// frequency space.
pub fn random_spectral_field(grid: &Grid, symbol: &str, band: u32, seed: u64) -> GridField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let b = band.min((n / 2 - 1) as u32) as f64;
    let mut spectrum = vec![Complex64::default(); grid.len()];
    for i in 0..grid.len() {
        let xi = grid.frequencies(i);
        let inside = (0..grid.dim()).all(|a| xi[a].abs() <= b && !grid.is_nyquist(i, a));
        if inside && i != 0 {
            let j = grid.negated(i);
            if j > i {
                let c = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
                spectrum[i] = c;
                spectrum[j] = c.conj();
            }
        }
    }
    let norm = (spectrum.iter().filter(|c| c.norm_sqr() > 0.0).count() as f64).sqrt().max(1.0);
    let scale = grid.len() as f64 / norm;
    for c in &mut spectrum {
        *c *= scale;
    }
    GridField::from_spectrum(grid, symbol, spectrum, true)
}

/// Seeded random band-limited real field (no cutoff); exact on grids with
/// `n > 2·band`.
pub fn random_trig_field(grid: &Grid, symbol: &str, band: u32, seed: u64) -> GridField {
    TrigPolynomial::random(grid.dim(), band, seed).field(grid, symbol)
}

/// `Σ c_α x^α` times a cutoff: the concrete field realizing a jet point at
/// the origin.
pub fn taylor_field(grid: &Grid, symbol: &str, coefficients: &[(MultiIndex, f64)], cutoff: &Cutoff) -> GridField {
    let dim = grid.dim();
    GridField::from_real_fn(grid, symbol, |x| {
        let c = cutoff.value(x, dim);
        if c == 0.0 {
            return 0.0;
        }
        let p: f64 = coefficients
            .iter()
            .map(|(a, coef)| coef * (0..dim).map(|j| x[j].powi(a.get(j) as i32)).product::<f64>())
            .sum();
        p * c
    })
}

/// Spectrum of the mollifier `η_t(x) = t^{−n} η(x/t)` (discretely
/// normalized to unit mass), where `η ∝ exp(−1/(1−|x|²))` on the unit ball.
/// Multiplying a spectrum by it and transforming back convolves with `η_t`.
pub fn mollifier_multiplier(grid: &Grid, t: f64) -> Vec<Complex64> {
    let n = grid.n();
    let h = grid.spacing();
    // Periodic displacement of bin index k from the origin of the kernel.
    let disp = |k: usize| if k <= n / 2 { k as f64 * h } else { (k as f64 - n as f64) * h };
    let mut data: Vec<Complex64> = (0..grid.len())
        .map(|i| {
            let ks = grid.unflatten(i);
            let r2: f64 = (0..grid.dim()).map(|a| (disp(ks[a]) / t).powi(2)).sum();
            let v = if r2 < 1.0 { (-1.0 / (1.0 - r2)).exp() } else { 0.0 };
            Complex64::new(v, 0.0)
        })
        .collect();
    let mass: f64 = data.iter().map(|c| c.re).sum();
    let mass = if mass > 0.0 { mass } else { 1.0 };
    for v in &mut data {
        *v /= mass;
    }
    // A single grid point (t below the spacing) is the identity kernel.
    if data.iter().all(|c| c.re == 0.0) {
        data[0] = Complex64::new(1.0, 0.0);
    }
    grid.fft(&mut data);
    data
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_step_limits_and_symmetry() {
        assert_eq!(smooth_step(-0.5), 0.0);
        assert_eq!(smooth_step(1.5), 1.0);
        for t in [0.1, 0.3, 0.5, 0.77] {
            let s: f64 = smooth_step(t);
            assert!((s + smooth_step(1.0 - t) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bump_support_and_plateau() {
        let g = Grid::new(2, 64).unwrap();
        let spec = BumpSpec::centered(2, 1.5, 0.7).with_center([0.3, -0.2, 0.0]).with_band(2, 5);
        let f = spec.sample(&g, "f");
        let content = spec.content();
        for i in 0..g.len() {
            let x = g.point(i);
            let r = ((x[0] - 0.3).powi(2) + (x[1] + 0.2).powi(2)).sqrt();
            if r >= 1.5 {
                assert_eq!(f.data[i].re, 0.0);
            }
            if r <= 0.7 {
                assert!((f.data[i].re - content.eval(&x)).abs() < 1e-12);
            }
        }
        assert_eq!(content.band(), 2);
        // Deterministic given the seed.
        assert_eq!(spec.sample(&g, "f"), f);
    }

    #[test]
    fn mollifier_has_unit_mass() {
        let g = Grid::new(2, 64).unwrap();
        let m = mollifier_multiplier(&g, 0.5);
        assert!((m[0].re - 1.0).abs() < 1e-12);
        let one = GridField::from_real_fn(&g, "1", |_| 1.0);
        let s: Vec<Complex64> = one.spectrum().iter().zip(&m).map(|(a, b)| a * b).collect();
        let c = GridField::from_spectrum(&g, "c", s, true);
        assert!(c.relative_max_error(&one) < 1e-12);
    }
}
