//! Surrogate norms: the Hardy-space norm through a dyadic maximal function,
//! and the BMO seminorm through dyadic mean oscillation.
//!
//! Both are constant-equivalent surrogates on the torus, meant for ratios and
//! stability checks; they do not reproduce any particular normalization.

use num_complex::Complex64;

use super::fields::mollifier_multiplier;
use super::grid::{Grid, GridField};

/// Relative mean `|∫h| / ∫|h|` above which the input is flagged: an `H¹`
/// function has zero mean, and for a nonzero mean the whole-space norm
/// diverges as the scale range grows.
pub const MEAN_FLAG_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct H1Estimate {
    /// `∫ max_j |h ∗ η_{2^j}|`.
    pub value: f64,
    /// `‖h ∗ η_{2^j}‖_{L¹}` for each scale, for diagnostics.
    pub per_scale: Vec<(i32, f64)>,
    pub relative_mean: f64,
    pub mean_flag: bool,
}

/// Maximal-function estimate over the dyadic scales `t = 2^j`,
/// `j ∈ [j_min, j_max]`, using the normalized standard mollifier.
pub fn h1_norm_estimate(h: &GridField, j_min: i32, j_max: i32) -> H1Estimate {
    let g = h.grid().clone();
    let spectrum = h.spectrum();
    let mut maximal = vec![0.0f64; g.len()];
    let mut per_scale = Vec::new();
    for j in j_min..=j_max {
        let t = 2f64.powi(j);
        let m = mollifier_multiplier(&g, t);
        let mut s: Vec<Complex64> = spectrum.iter().zip(&m).map(|(a, b)| a * b).collect();
        g.ifft(&mut s);
        let mut l1 = 0.0;
        for (acc, v) in maximal.iter_mut().zip(&s) {
            let a = v.norm();
            l1 += a;
            *acc = acc.max(a);
        }
        per_scale.push((j, l1 * g.cell_volume()));
    }
    let value = maximal.iter().sum::<f64>() * g.cell_volume();
    let abs_integral = h.data.iter().map(|c| c.norm()).sum::<f64>() * g.cell_volume();
    let relative_mean = if abs_integral == 0.0 {
        0.0
    } else {
        h.integral().norm() / abs_integral
    };
    H1Estimate {
        value,
        per_scale,
        relative_mean,
        mean_flag: relative_mean > MEAN_FLAG_THRESHOLD,
    }
}

/// `max_Q ⨍_Q |b − b_Q|` over all dyadic sub-cubes of the grid, from the
/// whole box down to single cells.
pub fn bmo_norm_estimate(b: &GridField) -> f64 {
    let g: &Grid = b.grid();
    let n = g.n();
    let dim = g.dim();
    let levels = n.trailing_zeros();
    let mut best: f64 = 0.0;
    for level in 0..=levels {
        let side = n >> level;
        let per_axis = n / side;
        let cubes = per_axis.pow(dim as u32);
        let mut sums = vec![Complex64::default(); cubes];
        let cube_of = |idx: usize| {
            let ks = g.unflatten(idx);
            (0..dim).fold(0, |acc, a| acc * per_axis + ks[a] / side)
        };
        for (i, v) in b.data.iter().enumerate() {
            sums[cube_of(i)] += v;
        }
        let count = side.pow(dim as u32) as f64;
        let means: Vec<Complex64> = sums.iter().map(|s| s / count).collect();
        let mut osc = vec![0.0; cubes];
        for (i, v) in b.data.iter().enumerate() {
            let c = cube_of(i);
            osc[c] += (v - means[c]).norm();
        }
        best = osc.iter().map(|o| o / count).fold(best, f64::max);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::fields::BumpSpec;
    use crate::spectral::multipliers::partial;

    #[test]
    fn mean_free_input_is_not_flagged() {
        let g = Grid::new(2, 64).unwrap();
        let f = BumpSpec::centered(2, 1.2, 0.3).sample(&g, "f");
        let h = partial(&f, 0).unwrap();
        let e = h1_norm_estimate(&h, -3, 1);
        assert!(!e.mean_flag && e.value > 0.0);
        let e2 = h1_norm_estimate(&f, -3, 1);
        assert!(e2.mean_flag);
        // Widening the scale range can only increase the estimate.
        assert!(h1_norm_estimate(&h, -3, 2).value >= e.value);
    }

    #[test]
    fn bmo_of_constant_is_zero_and_of_sign_is_one() {
        let g = Grid::new(2, 16).unwrap();
        let c = GridField::from_real_fn(&g, "c", |_| 3.0);
        assert!(bmo_norm_estimate(&c) < 1e-14);
        let s = GridField::from_real_fn(&g, "s", |x| if x[0] < 0.0 { -1.0 } else { 1.0 });
        assert!((bmo_norm_estimate(&s) - 1.0).abs() < 1e-14);
    }
}
