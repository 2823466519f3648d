//! Property tests: the coefficient criteria, the parity rules and the
//! decompositions agree with the exact Euler-operator verdict.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cclab::criteria::random::{random_bilinear_shape, random_multilinear, random_trilinear_shape};
use cclab::criteria::{
    bilinear_criterion, homogeneous_criterion, leibniz_multilinear_criterion, null_lagrangian, parity_classify,
    parity_spec, scaling_decompose, step_decompose, zero_integral, ParityShape,
};
use cclab::diffpoly::rat;
use cclab::multiindex::{enumerate, EnumerationMode};
use cclab::opdsl::{parse, pretty_print, CoefficientTable, OperatorSpec};
use cclab::DiffPolynomial;

fn bilinear(seed: u64) -> OperatorSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = random_bilinear_shape(&mut rng, 3, 2, 2);
    random_multilinear(&mut rng, &shape, 4, seed.is_multiple_of(2))
}

fn trilinear(seed: u64) -> OperatorSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = random_trilinear_shape(&mut rng, 3, 2);
    random_multilinear(&mut rng, &shape, 4, seed.is_multiple_of(2))
}

/// `Σ_j D_j(body_j)` for random bilinear bodies: an exact divergence built
/// without consulting the Euler operator.
fn divergence_of_random(seed: u64) -> OperatorSpec {
    let spec = bilinear(seed);
    let mut body = DiffPolynomial::zero(spec.dim);
    for axis in 0..spec.dim {
        let piece = bilinear(seed.wrapping_mul(31).wrapping_add(axis as u64 + 1));
        // Reuse the outer symbol table; pieces with another shape are skipped.
        if piece.dim != spec.dim || piece.symbol_table() != spec.symbol_table() {
            continue;
        }
        body = body.add(&piece.body.total_derivative(axis).unwrap()).unwrap();
    }
    body = body.add(&spec.body.total_derivative(0).unwrap()).unwrap();
    spec.with_body("divergence".into(), body)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bilinear_criterion_matches_euler(seed in any::<u64>()) {
        let spec = bilinear(seed);
        let table = CoefficientTable::from_spec(&spec).unwrap();
        let euler = zero_integral(&spec).unwrap().value;
        prop_assert_eq!(bilinear_criterion(&table).unwrap().value, euler);
        if table.is_slot_homogeneous() {
            prop_assert_eq!(homogeneous_criterion(&table).unwrap().value, euler);
        }
    }

    #[test]
    fn leibniz_criterion_matches_euler_on_trilinear(seed in any::<u64>()) {
        let spec = trilinear(seed);
        let table = CoefficientTable::from_spec(&spec).unwrap();
        prop_assert_eq!(
            leibniz_multilinear_criterion(&table).unwrap().value,
            zero_integral(&spec).unwrap().value
        );
    }

    #[test]
    fn divergences_are_zero_integral(seed in any::<u64>()) {
        let spec = divergence_of_random(seed);
        prop_assert!(spec.body.is_total_divergence().unwrap());
        prop_assert!(zero_integral(&spec).unwrap().value);
        if !spec.body.is_zero() {
            let table = CoefficientTable::from_spec(&spec).unwrap();
            prop_assert!(bilinear_criterion(&table).unwrap().value);
        }
    }

    #[test]
    fn witnesses_recheck(seed in any::<u64>()) {
        let spec = bilinear(seed);
        let v = zero_integral(&spec).unwrap();
        if !v.value {
            let w = v.witness.expect("a false verdict carries a witness");
            prop_assert!(w.recheck());
        }
    }

    #[test]
    fn null_lagrangians_are_zero_integral(seed in any::<u64>()) {
        let spec = bilinear(seed);
        if null_lagrangian(&spec).unwrap().value {
            prop_assert!(zero_integral(&spec).unwrap().value);
        }
    }

    #[test]
    fn decompositions_reassemble(seed in any::<u64>()) {
        let spec = bilinear(seed);
        let mut sum = DiffPolynomial::zero(spec.dim);
        let zi = zero_integral(&spec).unwrap().value;
        for (level, piece) in scaling_decompose(&spec) {
            prop_assert!(piece.body.terms().all(|(m, _)| m.order() == level));
            if zi {
                prop_assert!(zero_integral(&piece).unwrap().value);
                prop_assert!(level > 0);
            }
            sum = sum.add(&piece.body).unwrap();
        }
        prop_assert_eq!(&sum, &spec.body);
        if let Ok(d) = step_decompose(&spec) {
            prop_assert_eq!(d.recombine(spec.dim).unwrap(), spec.body.clone());
        }
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let spec = trilinear(seed);
        prop_assert_eq!(parse(&pretty_print(&spec)).unwrap(), spec);
    }

    #[test]
    fn parity_rules_hold_for_pairs(i in 0usize..10, j in 0usize..10, num in -5i64..=5, den in 1i64..=4) {
        let alphas = enumerate(2, 3, EnumerationMode::UpTo).unwrap();
        prop_assume!(i != j && num != 0);
        let p = vec![(alphas[i], rat(1, 1)), (alphas[j], rat(num, den))];
        for shape in [ParityShape::Difference, ParityShape::Sum, ParityShape::Product] {
            let spec = parity_spec(shape, 2, &p);
            prop_assume!(!spec.body.is_zero());
            prop_assert_eq!(parity_classify(&spec).unwrap().value, zero_integral(&spec).unwrap().value);
        }
    }
}
