//! Seeded generators of random multilinear operators, used by the
//! equivalence tests and the acceptance runs.
//!
//! Half of the interesting cases have zero integral, which a uniformly random
//! table almost never does, so [`random_multilinear`] can instead draw from
//! the kernel of the (exact, linear) map "coefficients ↦ Euler residuals".

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use super::linalg::null_space;
use crate::diffpoly::{DiffPolynomial, JetVar, Monomial, Rational, Symbol};
use crate::multiindex::{enumerate, EnumerationMode, MultiIndex};
use crate::opdsl::{Constraint, FunctionDecl, OperatorSpec};

/// Derivative orders allowed in one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotOrders {
    Exact(u32),
    UpTo(u32),
}

/// Shape of a random multilinear operator: one scalar or vector symbol per
/// slot, each with its own order range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearShape {
    pub dim: usize,
    pub arities: Vec<usize>,
    pub orders: Vec<SlotOrders>,
}

const SLOT_NAMES: [&str; 6] = ["u", "v", "w", "a", "b", "c"];
const COEFFICIENTS: [(i64, i64); 8] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1), (-3, 2)];
/// Cap on the candidate pool used for kernel sampling.
const MAX_POOL: usize = 256;

impl MultilinearShape {
    pub fn symbols(&self) -> BTreeMap<Symbol, usize> {
        self.arities
            .iter()
            .enumerate()
            .map(|(j, &m)| (Symbol::new(SLOT_NAMES[j]), m))
            .collect()
    }

    fn slot_indices(&self, j: usize) -> Vec<MultiIndex> {
        let (k, mode) = match self.orders[j] {
            SlotOrders::Exact(k) => (k, EnumerationMode::Exact),
            SlotOrders::UpTo(k) => (k, EnumerationMode::UpTo),
        };
        enumerate(self.dim, k, mode).expect("shape within multi-index limits")
    }

    /// Every monomial with one factor per slot.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut acc: Vec<Vec<JetVar>> = vec![Vec::new()];
        for j in 0..self.arities.len() {
            let sym = Symbol::new(SLOT_NAMES[j]);
            let choices: Vec<JetVar> = (1..=self.arities[j])
                .flat_map(|c| {
                    let sym = sym.clone();
                    self.slot_indices(j).into_iter().map(move |a| JetVar::new(sym.clone(), c, a))
                })
                .collect();
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v.clone());
                        p
                    })
                })
                .collect();
        }
        acc.into_iter().map(Monomial::from_vars).collect()
    }

    fn spec(&self, name: String, terms: Vec<(Monomial, Rational)>) -> OperatorSpec {
        let body = DiffPolynomial::from_terms(self.dim, self.symbols(), terms).expect("monomials match the shape");
        OperatorSpec {
            name,
            dim: self.dim,
            functions: (0..self.arities.len())
                .map(|j| FunctionDecl {
                    name: Symbol::new(SLOT_NAMES[j]),
                    arity: self.arities[j],
                    constraint: Constraint::None,
                })
                .collect(),
            exponents: None,
            body,
            expectations: BTreeMap::new(),
        }
    }
}

fn random_coefficient<R: Rng>(rng: &mut R) -> Rational {
    let (n, d) = COEFFICIENTS[rng.gen_range(0..COEFFICIENTS.len())];
    Rational::new(n.into(), d.into())
}

/// A random multilinear operator of the given shape. With `in_kernel`, the
/// result is a nonzero combination of operators with vanishing Euler
/// residuals (falling back to a random one if the sampled pool has no such
/// combination).
pub fn random_multilinear<R: Rng>(rng: &mut R, shape: &MultilinearShape, terms: usize, in_kernel: bool) -> OperatorSpec {
    let mut pool = shape.monomials();
    pool.shuffle(rng);
    if in_kernel {
        pool.truncate(MAX_POOL);
        if let Some(spec) = kernel_sample(rng, shape, &pool) {
            return spec;
        }
    }
    let chosen = pool.into_iter().take(terms.max(1));
    let terms = chosen.map(|m| (m, random_coefficient(rng))).collect();
    shape.spec("random".into(), terms)
}

fn kernel_sample<R: Rng>(rng: &mut R, shape: &MultilinearShape, pool: &[Monomial]) -> Option<OperatorSpec> {
    let symbols = shape.symbols();
    // Columns: candidate monomials; rows: coefficients of the residuals.
    let mut row_index: BTreeMap<(Symbol, usize, Monomial), usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, Rational)>> = Vec::new();
    for m in pool {
        let p = DiffPolynomial::from_terms(shape.dim, symbols.clone(), [(m.clone(), Rational::from_integer(1.into()))])
            .expect("valid monomial");
        let mut col = Vec::new();
        for ((s, i), r) in p.euler_residuals().expect("valid polynomial") {
            for (rm, c) in r.terms() {
                let next = row_index.len();
                let row = *row_index.entry((s.clone(), i, rm.clone())).or_insert(next);
                col.push((row, c.clone()));
            }
        }
        columns.push(col);
    }
    let mut rows = vec![vec![Rational::zero(); pool.len()]; row_index.len()];
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col {
            rows[*r][c] += v;
        }
    }
    let basis = null_space(&rows, pool.len());
    if basis.is_empty() {
        return None;
    }
    let picks = rng.gen_range(1..=basis.len().min(3));
    let mut coeffs = vec![Rational::zero(); pool.len()];
    for b in basis.choose_multiple(rng, picks) {
        let w = random_coefficient(rng);
        for (x, y) in coeffs.iter_mut().zip(b) {
            *x += &w * y;
        }
    }
    let terms: Vec<(Monomial, Rational)> = pool
        .iter()
        .cloned()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Some(shape.spec("random-kernel".into(), terms))
}

/// A random bilinear shape with `n ≤ max_dim`, orders up to `max_order` and
/// arities up to `max_arity`; slot-homogeneous with probability ½.
pub fn random_bilinear_shape<R: Rng>(rng: &mut R, max_dim: usize, max_order: u32, max_arity: usize) -> MultilinearShape {
    let dim = rng.gen_range(2..=max_dim.max(2));
    let homogeneous = rng.gen_bool(0.5);
    let orders = (0..2)
        .map(|_| {
            let k = rng.gen_range(0..=max_order);
            if homogeneous {
                SlotOrders::Exact(k)
            } else {
                SlotOrders::UpTo(k)
            }
        })
        .collect();
    MultilinearShape {
        dim,
        arities: (0..2).map(|_| rng.gen_range(1..=max_arity)).collect(),
        orders,
    }
}

/// A random slot-homogeneous trilinear shape over scalar or vector slots.
pub fn random_trilinear_shape<R: Rng>(rng: &mut R, max_dim: usize, max_order: u32) -> MultilinearShape {
    let dim = rng.gen_range(2..=max_dim.max(2));
    MultilinearShape {
        dim,
        arities: (0..3).map(|_| rng.gen_range(1..=2)).collect(),
        orders: (0..3).map(|_| SlotOrders::Exact(rng.gen_range(0..=max_order))).collect(),
    }
}

/// Outcome of comparing the as-printed multilinear coefficient condition
/// with the Euler verdict on seeded random trilinear operators.
#[derive(Debug, Clone, PartialEq)]
pub struct TrilinearSurvey {
    pub checked: usize,
    /// Operators with zero integral among those checked.
    pub zero_integral: usize,
    /// Cases where the exact Leibniz criterion disagrees with the Euler
    /// verdict (an engine error if nonempty).
    pub leibniz_disagreements: Vec<OperatorSpec>,
    /// Cases where the coefficient condition disagrees with the Euler
    /// verdict, named `counterexample-<k>`.
    pub counterexamples: Vec<OperatorSpec>,
}

/// Draws `count` slot-homogeneous trilinear operators (`n ≤ 3`, orders
/// `≤ 2`, every other one a scalar-slot draw from the zero-integral kernel) and records where
/// the coefficient criteria disagree with the Euler operator.
pub fn trilinear_survey(seed: u64, count: usize) -> Result<TrilinearSurvey, super::CriteriaError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut survey = TrilinearSurvey {
        checked: 0,
        zero_integral: 0,
        leibniz_disagreements: Vec::new(),
        counterexamples: Vec::new(),
    };
    for k in 0..count {
        let in_kernel = k % 2 == 0;
        // Kernel draws use scalar slots (keeping the candidate pool small
        // enough to contain kernel elements) and retry shapes whose kernel
        // is trivial.
        let mut attempts = 0;
        let spec = loop {
            let mut shape = random_trilinear_shape(&mut rng, 3, 2);
            if in_kernel {
                shape.arities = vec![1, 1, 1];
            }
            let spec = random_multilinear(&mut rng, &shape, 4, in_kernel);
            attempts += 1;
            if !in_kernel || attempts == 20 || spec.body.is_total_divergence()? {
                break spec;
            }
        };
        let table = crate::opdsl::CoefficientTable::from_spec(&spec)?;
        let euler = super::zero_integral(&spec)?.value;
        survey.checked += 1;
        if euler {
            survey.zero_integral += 1;
        }
        if super::leibniz_multilinear_criterion(&table)?.value != euler {
            survey.leibniz_disagreements.push(spec.clone());
        }
        if super::binomial_product_condition(&table)?.value != euler {
            let name = format!("counterexample-{}", survey.counterexamples.len() + 1);
            survey.counterexamples.push(OperatorSpec { name, ..spec });
        }
    }
    Ok(survey)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kernel_samples_have_zero_integral() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shape = MultilinearShape {
            dim: 2,
            arities: vec![1, 1],
            orders: vec![SlotOrders::UpTo(2), SlotOrders::UpTo(2)],
        };
        for _ in 0..10 {
            let s = random_multilinear(&mut rng, &shape, 4, true);
            assert!(!s.body.is_zero());
            assert!(s.body.is_total_divergence().unwrap());
        }
    }

    #[test]
    fn monomial_pool_size() {
        let shape = MultilinearShape {
            dim: 2,
            arities: vec![2, 1, 1],
            orders: vec![SlotOrders::Exact(1), SlotOrders::Exact(1), SlotOrders::UpTo(1)],
        };
        assert_eq!(shape.monomials().len(), (2 * 2) * 2 * 3);
    }
}
