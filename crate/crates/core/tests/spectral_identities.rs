//! Property tests of the spectral toolkit on small periodic grids.

use num_complex::Complex64;
use proptest::prelude::*;

use cclab::spectral::beurling::{kb_self_adjoint_error, inner};
use cclab::spectral::fields::random_spectral_field;
use cclab::spectral::hardy::h1_norm_estimate;
use cclab::spectral::multipliers::neg_laplacian;
use cclab::spectral::potentials::poisson_solve_vector;
use cclab::spectral::{
    beurling, divergence, gradient, jacobian, kb_identity_check, leray_project, partial, poisson_solve, potential_b,
    potential_c, riesz, wirtinger, Grid, GridField,
};

fn plane() -> Grid {
    Grid::new(2, 32).unwrap()
}

fn field(g: &Grid, seed: u64) -> GridField {
    random_spectral_field(g, "f", 6, seed)
}

fn vector(g: &Grid, seed: u64) -> Vec<GridField> {
    (0..g.dim()).map(|j| field(g, seed.wrapping_add(j as u64 * 7919))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn beurling_is_an_isometry_on_mean_free_fields(seed in any::<u64>()) {
        let f = field(&plane(), seed);
        let sf = beurling(&f).unwrap();
        prop_assert!((sf.l2_norm() - f.l2_norm()).abs() <= 1e-12 * f.l2_norm());
    }

    #[test]
    fn beurling_maps_dzbar_to_dz(seed in any::<u64>()) {
        let (uz, uzbar) = wirtinger(&field(&plane(), seed)).unwrap();
        prop_assert!(beurling(&uzbar).unwrap().relative_max_error(&uz) <= 1e-12);
    }

    #[test]
    fn jacobian_is_difference_of_wirtinger_squares(seed in any::<u64>()) {
        let g = plane();
        let u = vector(&g, seed);
        let z = GridField::from_complex_fn(&g, "u", |_| Complex64::default())
            .add(&u[0])
            .add(&u[1].map(|c| c * Complex64::i()));
        let (uz, uzbar) = wirtinger(&z).unwrap();
        let rhs = uz.map(|c| Complex64::new(c.norm_sqr(), 0.0)).sub(&uzbar.map(|c| Complex64::new(c.norm_sqr(), 0.0)));
        prop_assert!(jacobian(&u).unwrap().relative_max_error(&rhs) <= 1e-12);
    }

    #[test]
    fn jacobian_integrates_to_zero(seed in any::<u64>()) {
        let u = vector(&plane(), seed);
        let j = jacobian(&u).unwrap();
        let scale = j.map(|c| Complex64::new(c.norm(), 0.0)).integral().re;
        prop_assert!(j.integral().norm() <= 1e-12 * scale);
    }

    #[test]
    fn kb_identity_and_symmetry(seed in any::<u64>()) {
        let g = plane();
        let b = field(&g, seed);
        let f = field(&g, seed ^ 1);
        let h = field(&g, seed ^ 2);
        prop_assert!(kb_identity_check(&b, &f).unwrap() <= 1e-10);
        prop_assert!(kb_self_adjoint_error(&b, &f, &h).unwrap() <= 1e-10);
    }

    #[test]
    fn leray_projection_is_a_solenoidal_projector(seed in any::<u64>(), three in any::<bool>()) {
        let g = if three { Grid::new(3, 16).unwrap() } else { plane() };
        let u = vector(&g, seed);
        let p = leray_project(&u).unwrap();
        let scale = u.iter().map(|c| c.max_abs()).fold(0.0, f64::max);
        prop_assert!(divergence(&p).unwrap().max_abs() <= 1e-12 * scale * g.n() as f64);
        let pp = leray_project(&p).unwrap();
        for (a, b) in pp.iter().zip(&p) {
            prop_assert!(a.sub(b).max_abs() <= 1e-12 * scale);
        }
        // The complement is a gradient: it is orthogonal to the projection.
        let q: Vec<GridField> = u.iter().zip(&p).map(|(a, b)| a.sub(b)).collect();
        let cross: f64 = p.iter().zip(&q).map(|(a, b)| inner(a, b).re).sum();
        prop_assert!(cross.abs() <= 1e-10 * u.iter().map(|c| c.l2_norm().powi(2)).sum::<f64>());
    }

    #[test]
    fn riesz_transforms_sum_to_minus_identity(seed in any::<u64>()) {
        let g = plane();
        let f = field(&g, seed);
        let mut sum = GridField::zeros(&g, "s");
        for j in 0..2 {
            sum = sum.add(&riesz(&riesz(&f, j).unwrap(), j).unwrap());
        }
        // Bins on a Nyquist line lose one transform; the field has none.
        prop_assert!(sum.add(&f).max_abs() <= 1e-12 * f.max_abs());
    }

    #[test]
    fn poisson_solve_inverts_the_laplacian(seed in any::<u64>()) {
        let f = field(&Grid::new(3, 16).unwrap(), seed);
        let t = poisson_solve(&f).unwrap();
        prop_assert!(neg_laplacian(&t).relative_max_error(&f) <= 1e-12);
    }

    #[test]
    fn potential_composition_is_minus_laplacian(seed in any::<u64>()) {
        let g = Grid::new(3, 16).unwrap();
        let t = vector(&g, seed);
        // In general B ∘ C = curl curl = −Δ + ∇ div.
        let bc = potential_b(&potential_c(&t).unwrap()).unwrap();
        let grad_div = gradient(&divergence(&t).unwrap()).unwrap();
        for ((a, b), c) in bc.iter().zip(&t).zip(&grad_div) {
            prop_assert!(a.relative_max_error(&neg_laplacian(b).add(c)) <= 1e-10);
        }
        // On divergence-free fields it is −Δ, and C ∘ (−Δ)⁻¹ inverts B.
        let v = leray_project(&t).unwrap();
        let bc = potential_b(&potential_c(&v).unwrap()).unwrap();
        for (a, b) in bc.iter().zip(&v) {
            prop_assert!(a.relative_max_error(&neg_laplacian(b)) <= 1e-10);
        }
        let back = potential_b(&potential_c(&poisson_solve_vector(&v).unwrap()).unwrap()).unwrap();
        for (a, b) in back.iter().zip(&v) {
            prop_assert!(a.relative_max_error(b) <= 1e-10);
        }
    }

    #[test]
    fn gradient_components_commute(seed in any::<u64>()) {
        let f = field(&plane(), seed);
        let grad = gradient(&f).unwrap();
        let a = partial(&grad[0], 1).unwrap();
        let b = partial(&grad[1], 0).unwrap();
        prop_assert!(a.sub(&b).max_abs() <= 1e-12 * a.max_abs().max(1.0));
    }
}

#[test]
fn hardy_estimate_flags_nonzero_means() {
    let g = Grid::new(2, 64).unwrap();
    let f = field(&g, 3);
    assert!(!h1_norm_estimate(&f, -4, 1).mean_flag);
    let shifted = f.map(|c| c + Complex64::new(1.0, 0.0));
    assert!(h1_norm_estimate(&shifted, -4, 1).mean_flag);
}
