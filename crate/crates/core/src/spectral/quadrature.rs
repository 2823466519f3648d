//! The numeric oracle: integrate an operator's body over sampled fields and
//! compare with the exact verdict.
//!
//! Fields are first stripped of Nyquist content, so every spectral
//! derivative is the exact derivative of one real trigonometric polynomial.
//! The jet fields are then zero-padded onto a grid fine enough that the
//! degree-`d` products are represented without aliasing, which makes the
//! periodic rectangle rule exact for the integral of the interpolants: total
//! divergences integrate to round-off, and integration by parts holds
//! exactly at the discrete level.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fields::{BumpSpec, Cutoff};
use super::grid::{Grid, GridField};
use super::multipliers::{derivative_symbol, gradient, leray_project};
use super::potentials::potential_b;
use super::SpectralError;
use crate::criteria::{potential_substitute, zero_integral, NumericSummary, Witness};
use crate::diffpoly::{DiffPolynomial, JetVar, Symbol};
use crate::opdsl::{Constraint, OperatorSpec};

/// Sampled components for each symbol (component `i` at index `i − 1`).
pub type FieldMap = BTreeMap<Symbol, Vec<GridField>>;

/// `∫ L` and the comparison scale `∫ Σ |terms|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub scale: f64,
}

impl Quadrature {
    /// `|∫ L| / scale`, with `0/0 = 0`.
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            if self.value == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.value.abs() / self.scale
        }
    }
}

/// Quadrature of `spec.body` on the given fields.
pub fn quadrature_integral(spec: &OperatorSpec, fields: &FieldMap) -> Result<Quadrature, SpectralError> {
    quadrature_poly(&spec.body, fields, None)
}

fn fine_resolution(n: usize, degree: u32) -> usize {
    // Products of `d` factors of band < n/2 alias onto the mean only when
    // d·(n/2 − 1) ≥ m.
    let factor = (degree as usize).div_ceil(2).max(1).next_power_of_two();
    n * factor
}

fn strip_nyquist(g: &Grid, spectrum: &mut [Complex64]) {
    for (i, c) in spectrum.iter_mut().enumerate() {
        if (0..g.dim()).any(|a| g.is_nyquist(i, a)) {
            *c = Complex64::default();
        }
    }
}

/// Zero-pads a (Nyquist-free) spectrum from `coarse` onto `fine` and returns
/// the real samples there.
fn upsample(coarse: &Grid, fine: &Grid, spectrum: &[Complex64]) -> Vec<f64> {
    let mut out = vec![Complex64::default(); fine.len()];
    let factor = fine.len() as f64 / coarse.len() as f64;
    let (n, m) = (coarse.n(), fine.n());
    for (i, c) in spectrum.iter().enumerate() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let ks = coarse.unflatten(i);
        let mut fk = [0usize; 3];
        for a in 0..coarse.dim() {
            fk[a] = if ks[a] < n / 2 { ks[a] } else { m - (n - ks[a]) };
        }
        out[fine.flatten(&fk[..coarse.dim()])] = c * factor;
    }
    fine.ifft(&mut out);
    out.into_iter().map(|c| c.re).collect()
}

/// Quadrature of a polynomial body, optionally multiplied by a weight field.
pub fn quadrature_poly(
    body: &DiffPolynomial,
    fields: &FieldMap,
    weight: Option<&GridField>,
) -> Result<Quadrature, SpectralError> {
    let vars = body.jet_vars();
    let any = fields.values().flatten().next().or(weight);
    let Some(first) = any else {
        return if vars.is_empty() && body.is_zero() {
            Ok(Quadrature { value: 0.0, scale: 0.0 })
        } else {
            Err(SpectralError::MissingField("any".into()))
        };
    };
    let coarse = first.grid().clone();
    if coarse.dim() != body.dim() {
        return Err(SpectralError::Dimension(format!(
            "body of dimension {} on a {}-dimensional grid",
            body.dim(),
            coarse.dim()
        )));
    }
    let degree = body.terms().map(|(m, _)| m.degree()).max().unwrap_or(0) + u32::from(weight.is_some());
    let fine = Grid::new(coarse.dim(), fine_resolution(coarse.n(), degree))?;

    // Spectra of the symbol components, computed once.
    let mut spectra: BTreeMap<(Symbol, usize), Vec<Complex64>> = BTreeMap::new();
    for v in &vars {
        let key = (v.symbol.clone(), v.component);
        if spectra.contains_key(&key) {
            continue;
        }
        let comps = fields
            .get(&v.symbol)
            .ok_or_else(|| SpectralError::MissingField(v.symbol.to_string()))?;
        let f = comps.get(v.component - 1).ok_or(SpectralError::Arity {
            expected: body.arity(&v.symbol).unwrap_or(v.component),
            found: comps.len(),
        })?;
        let mut s = f.spectrum();
        strip_nyquist(&coarse, &mut s);
        spectra.insert(key, s);
    }
    let mut jet_values: Vec<Vec<f64>> = Vec::with_capacity(vars.len());
    let index: BTreeMap<&JetVar, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    for v in &vars {
        let base = &spectra[&(v.symbol.clone(), v.component)];
        let d: Vec<Complex64> = base
            .iter()
            .enumerate()
            .map(|(i, c)| c * derivative_symbol(&coarse, &v.index, &coarse.frequencies(i), i))
            .collect();
        jet_values.push(upsample(&coarse, &fine, &d));
    }
    let weight_values = weight.map(|w| {
        let mut s = w.spectrum();
        strip_nyquist(&coarse, &mut s);
        upsample(&coarse, &fine, &s)
    });

    let terms: Vec<(f64, Vec<(usize, i32)>)> = body
        .terms()
        .map(|(m, c)| {
            let factors = m.factors().iter().map(|(v, e)| (index[v], *e as i32)).collect();
            (c.to_f64().expect("finite coefficient"), factors)
        })
        .collect();
    let (mut value, mut scale) = (0.0, 0.0);
    for p in 0..fine.len() {
        let w = weight_values.as_ref().map_or(1.0, |wv| wv[p]);
        for (c, factors) in &terms {
            let t = c * w * factors.iter().map(|(i, e)| jet_values[*i][p].powi(*e)).product::<f64>();
            value += t;
            scale += t.abs();
        }
    }
    let vol = fine.cell_volume();
    Ok(Quadrature {
        value: value * vol,
        scale: scale * vol,
    })
}

/// Settings for [`numeric_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct NumericOptions {
    /// Points per axis; `None` selects the default for the dimension.
    pub grid: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            grid: None,
            trials: 20,
            seed: 42,
            tol: 1e-8,
        }
    }
}

impl NumericOptions {
    /// Threshold a witness-guided sample must reach when the verdict is false.
    pub fn witness_threshold(&self) -> f64 {
        (1e3 * self.tol).max(1e-3)
    }

    pub fn grid_for(&self, dim: usize) -> Result<Grid, SpectralError> {
        match self.grid {
            Some(n) => Grid::new(dim, n),
            None => Grid::default_for(dim),
        }
    }
}

/// Support radius of random samples: the support diameter stays below half
/// the period.
const SAMPLE_RADIUS: f64 = 1.5;
const SAMPLE_PLATEAU: f64 = 0.5;
const SAMPLE_BAND: u32 = 3;

fn random_bump(dim: usize, rng: &mut ChaCha8Rng) -> BumpSpec {
    let mut center = [0.0; 3];
    for c in center.iter_mut().take(dim) {
        *c = rng.gen_range(-0.1..=0.1);
    }
    BumpSpec::centered(dim, SAMPLE_RADIUS, SAMPLE_PLATEAU)
        .with_center(center)
        .with_band(SAMPLE_BAND, rng.gen())
}

/// One seeded admissible sample for every symbol of `spec`: free slots are
/// random bumps, divergence-free slots Leray projections of random bumps,
/// curl-free slots gradients of random bumps.
pub fn random_fields(spec: &OperatorSpec, grid: &Grid, seed: u64) -> Result<FieldMap, SpectralError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = spec.dim;
    let mut out = FieldMap::new();
    for f in &spec.functions {
        let name = f.name.as_str();
        let comps = match f.constraint {
            Constraint::None => (0..f.arity)
                .map(|_| random_bump(dim, &mut rng).sample(grid, name))
                .collect(),
            Constraint::Div0 => {
                let raw: Vec<GridField> = (0..dim).map(|_| random_bump(dim, &mut rng).sample(grid, name)).collect();
                leray_project(&raw)?
            }
            Constraint::Curl0 => gradient(&random_bump(dim, &mut rng).sample(grid, name))?,
        };
        out.insert(f.name.clone(), comps);
    }
    Ok(out)
}

/// Cutoff used to localize witness polynomials, and the small bump used to
/// perturb them.
pub fn witness_cutoff() -> Cutoff {
    Cutoff::new([0.0; 3], 0.8, 1.5)
}

pub fn perturbation_cutoff() -> Cutoff {
    Cutoff::new([0.0; 3], 0.2, 0.6)
}

/// Realizes a witness as fields of the (potential-level) symbols:
/// Taylor polynomials times a cutoff, zero for unmentioned components.
pub fn witness_fields(witness: &Witness, symbols: &BTreeMap<Symbol, usize>, grid: &Grid) -> FieldMap {
    let taylor = witness.taylor_coefficients();
    let cut = witness_cutoff();
    symbols
        .iter()
        .map(|(s, &arity)| {
            let comps = (1..=arity)
                .map(|i| match taylor.get(&(s.clone(), i)) {
                    Some(terms) => {
                        let coeffs: Vec<_> = terms
                            .iter()
                            .map(|(a, c)| (*a, c.to_f64().expect("finite coefficient")))
                            .collect();
                        super::fields::taylor_field(grid, s.as_str(), &coeffs, &cut)
                    }
                    None => GridField::zeros(grid, s.as_str()),
                })
                .collect();
            (s.clone(), comps)
        })
        .collect()
}

/// Maps potential-level fields back to the constrained fields of `spec`.
fn realize_constrained(spec: &OperatorSpec, potentials: &FieldMap, grid: &Grid) -> Result<FieldMap, SpectralError> {
    let (_, map) = potential_substitute(spec)?;
    let mut out = FieldMap::new();
    for f in &spec.functions {
        let comps = match map.get(&f.name) {
            None => potentials[&f.name].clone(),
            Some((pot, Constraint::Div0)) => match potentials.get(pot) {
                Some(phi) => potential_b(phi)?,
                // One dimension: a divergence-free compactly supported field is 0.
                None => vec![GridField::zeros(grid, f.name.as_str()); spec.dim],
            },
            Some((pot, _)) => gradient(&potentials[pot][0])?,
        };
        out.insert(f.name.clone(), comps);
    }
    Ok(out)
}

/// Variation of `∫ L` at `w` in the direction `ψ e_i` of one (potential
/// level) symbol component, computed two independent ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationCheck {
    /// `d/dt ∫ L(w + tψe_i)` at 0, from exact polynomial interpolation in `t`.
    pub numeric: f64,
    /// `∫ E_i(L)(w) ψ`.
    pub symbolic: f64,
    /// `|numeric − symbolic| / ∫ |E_i(L)(w) ψ|`.
    pub relative_error: f64,
}

/// Lagrange weights for `f'(0)` from samples at `t = −m..=m`.
fn derivative_weights(m: i64) -> Vec<(i64, f64)> {
    let nodes: Vec<i64> = (-m..=m).collect();
    nodes
        .iter()
        .map(|&k| {
            // d/dt ℓ_k(t) at t = 0.
            let mut w = 0.0;
            for &j in &nodes {
                if j == k {
                    continue;
                }
                let mut term = 1.0 / (k - j) as f64;
                for &l in &nodes {
                    if l != k && l != j {
                        term *= -(l as f64) / (k - l) as f64;
                    }
                }
                w += term;
            }
            (k, w)
        })
        .collect()
}

fn perturbed(fields: &FieldMap, symbol: &Symbol, component: usize, psi: &GridField, t: f64) -> FieldMap {
    let mut f = fields.clone();
    let slot = &mut f.get_mut(symbol).expect("symbol present")[component - 1];
    *slot = slot.add(&psi.scale(t));
    f
}

/// Compares the first variation of `∫ body` with the pairing of the Euler
/// residual against the perturbation.
pub fn variation_check(
    body: &DiffPolynomial,
    fields: &FieldMap,
    symbol: &Symbol,
    component: usize,
    psi: &GridField,
) -> Result<VariationCheck, SpectralError> {
    let degree = body.terms().map(|(m, _)| m.degree()).max().unwrap_or(0);
    let m = i64::from(degree.div_ceil(2).max(1));
    let mut numeric = 0.0;
    for (k, w) in derivative_weights(m) {
        let q = quadrature_poly(body, &perturbed(fields, symbol, component, psi, k as f64), None)?;
        numeric += w * q.value;
    }
    let residual = body.euler_operator(symbol, component)?;
    let pairing = quadrature_poly(&residual, fields, Some(psi))?;
    let denom = pairing.scale.max(numeric.abs()).max(f64::MIN_POSITIVE);
    Ok(VariationCheck {
        numeric,
        symbolic: pairing.value,
        relative_error: (numeric - pairing.value).abs() / denom,
    })
}

/// Outcome of the witness-guided evaluation for a false verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessEvaluation {
    /// `|∫ L| / scale` at `w + tψe_i` for each `t`.
    pub samples: Vec<(f64, f64)>,
    pub best: f64,
    pub variation: VariationCheck,
}

/// Evaluates `∫ L` near the realized witness: the Euler residual is nonzero
/// at the origin, so perturbing the varied component by a small bump there
/// changes the integral at first order.
pub fn witness_evaluation(spec: &OperatorSpec, witness: &Witness, grid: &Grid) -> Result<WitnessEvaluation, SpectralError> {
    let level = if spec.is_constrained() {
        potential_substitute(spec)?.0
    } else {
        spec.clone()
    };
    let base = witness_fields(witness, &level.symbol_table(), grid);
    let psi = perturbation_cutoff().field(grid, "psi");
    let variation = variation_check(&level.body, &base, &witness.residual_symbol, witness.residual_component, &psi)?;
    let mut samples = Vec::new();
    for t in [0.0, 0.5, 1.0, 2.0] {
        let pot = perturbed(&base, &witness.residual_symbol, witness.residual_component, &psi, t);
        let fields = if spec.is_constrained() {
            realize_constrained(spec, &pot, grid)?
        } else {
            pot
        };
        samples.push((t, quadrature_integral(spec, &fields)?.relative()));
    }
    let best = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    Ok(WitnessEvaluation {
        samples,
        best,
        variation,
    })
}

/// Runs the quadrature oracle on `spec`: `trials` seeded random samples,
/// plus the witness-guided sample when the exact verdict is false.
pub fn numeric_check(spec: &OperatorSpec, opts: &NumericOptions) -> Result<NumericSummary, SpectralError> {
    let verdict = zero_integral(spec)?;
    let grid = opts.grid_for(spec.dim)?;
    let mut max_rel: f64 = 0.0;
    for t in 0..opts.trials {
        let seed = opts.seed.wrapping_mul(1_000_003).wrapping_add(t as u64);
        let fields = random_fields(spec, &grid, seed)?;
        max_rel = max_rel.max(quadrature_integral(spec, &fields)?.relative());
    }
    let (witness_rel, agrees) = match (&verdict.value, &verdict.witness) {
        (true, _) => (None, max_rel <= opts.tol),
        (false, Some(w)) => {
            let e = witness_evaluation(spec, w, &grid)?;
            (Some(e.best), e.best >= opts.witness_threshold())
        }
        (false, None) => (None, false),
    };
    Ok(NumericSummary {
        trials: opts.trials,
        seed: opts.seed,
        tol: opts.tol,
        max_rel_integral: max_rel,
        witness_rel_integral: witness_rel,
        agrees,
    })
}
