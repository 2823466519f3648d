//! Parity rules for the three classical shapes built from one scalar
//! constant-coefficient operator `P = Σ c_α ∂^α`:
//!
//! * difference `P(u)v − P(v)u`: zero integral iff every `|α|` is even;
//! * sum `P(u)v + P(v)u`: zero integral iff every `|α|` is odd;
//! * product `P(uv)`: zero integral iff `c_0 = 0`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{refuted, CriteriaError, Method, Verdict};
use crate::diffpoly::{DiffPolynomial, JetVar, Monomial, Rational, Symbol};
use crate::multiindex::{binomial, MultiIndex};
use crate::opdsl::{Constraint, FunctionDecl, OperatorSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParityShape {
    Difference,
    Sum,
    Product,
}

/// `Σ c_α ∂^α` as a list of nonzero terms.
pub type ScalarOperator = Vec<(MultiIndex, Rational)>;

fn monomial(u: &Symbol, a: MultiIndex, v: &Symbol, b: MultiIndex) -> Monomial {
    Monomial::from_vars([JetVar::new(u.clone(), 1, a), JetVar::new(v.clone(), 1, b)])
}

/// Body of the given shape over the scalar symbols `u`, `v`.
pub fn parity_body(shape: ParityShape, dim: usize, u: &Symbol, v: &Symbol, p: &[(MultiIndex, Rational)]) -> DiffPolynomial {
    let symbols: BTreeMap<Symbol, usize> = [(u.clone(), 1), (v.clone(), 1)].into();
    let zero = MultiIndex::zero(dim).expect("dimension");
    let mut terms = Vec::new();
    for (alpha, c) in p {
        match shape {
            ParityShape::Difference | ParityShape::Sum => {
                let sign = if shape == ParityShape::Sum { c.clone() } else { -c.clone() };
                terms.push((monomial(u, *alpha, v, zero), c.clone()));
                terms.push((monomial(u, zero, v, *alpha), sign));
            }
            ParityShape::Product => {
                for beta in alpha.sub_indices() {
                    let rest = alpha.checked_sub(&beta).expect("sub-index");
                    let w = Rational::from_integer(binomial(alpha, &beta).expect("same dimension"));
                    terms.push((monomial(u, beta, v, rest), c * w));
                }
            }
        }
    }
    DiffPolynomial::from_terms(dim, symbols, terms).expect("valid terms")
}

/// Spec of the given shape with `u, v: R^1`.
pub fn parity_spec(shape: ParityShape, dim: usize, p: &[(MultiIndex, Rational)]) -> OperatorSpec {
    let (u, v) = (Symbol::new("u"), Symbol::new("v"));
    let decl = |s: &Symbol| FunctionDecl {
        name: s.clone(),
        arity: 1,
        constraint: Constraint::None,
    };
    OperatorSpec {
        name: format!("{shape:?}").to_lowercase(),
        dim,
        functions: vec![decl(&u), decl(&v)],
        exponents: None,
        body: parity_body(shape, dim, &u, &v, p),
        expectations: BTreeMap::new(),
    }
}

/// Recognizes the shape and recovers `P` (for the difference shape the
/// order-zero coefficient cancels and is reported as absent).
pub fn detect_parity_shape(spec: &OperatorSpec) -> Result<(ParityShape, ScalarOperator), CriteriaError> {
    let scalars: Vec<&FunctionDecl> = spec.functions.iter().collect();
    if scalars.len() != 2 || scalars.iter().any(|f| f.arity != 1 || f.constraint != Constraint::None) {
        return Err(CriteriaError::ShapeNotDetected(
            "needs exactly two unconstrained scalar functions".into(),
        ));
    }
    let (u, v) = (&scalars[0].name, &scalars[1].name);
    let zero = MultiIndex::zero(spec.dim).expect("dimension");
    // Coefficients of ∂^α u · v.
    let mut d: Vec<(MultiIndex, Rational)> = Vec::new();
    for (m, c) in spec.body.terms() {
        let vars = m.expanded();
        if vars.len() == 2 && vars.iter().any(|x| &x.symbol == v && x.index == zero) {
            if let Some(x) = vars.iter().find(|x| &x.symbol == u) {
                d.push((x.index, c.clone()));
            }
        }
    }
    let without_zero: ScalarOperator = d.iter().filter(|(a, _)| !a.is_zero()).cloned().collect();
    let candidates = [
        (ParityShape::Difference, without_zero.clone()),
        (ParityShape::Sum, {
            let mut p = without_zero.clone();
            if let Some((_, c0)) = d.iter().find(|(a, _)| a.is_zero()) {
                p.push((zero, c0 / Rational::from_integer(2.into())));
            }
            p
        }),
        (ParityShape::Product, d.clone()),
    ];
    for (shape, p) in candidates {
        if parity_body(shape, spec.dim, u, v, &p).with_symbol_table(spec.symbol_table())? == spec.body {
            let mut p = p;
            p.sort();
            return Ok((shape, p));
        }
    }
    Err(CriteriaError::ShapeNotDetected(
        "body is not P(u)v - P(v)u, P(u)v + P(v)u or P(uv)".into(),
    ))
}

/// Zero-integral verdict from the parity rule of the detected shape.
pub fn parity_classify(spec: &OperatorSpec) -> Result<Verdict, CriteriaError> {
    let (shape, p) = detect_parity_shape(spec)?;
    let violations: BTreeMap<String, Rational> = p
        .iter()
        .filter(|(alpha, c)| {
            !c.is_zero()
                && match shape {
                    ParityShape::Difference => alpha.order() % 2 == 1,
                    ParityShape::Sum => alpha.order() % 2 == 0,
                    ParityShape::Product => alpha.is_zero(),
                }
        })
        .map(|(alpha, c)| (format!("{shape:?} alpha={alpha}").to_lowercase(), c.clone()))
        .collect();
    if violations.is_empty() {
        Ok(Verdict::holds(Method::ParityRule))
    } else {
        refuted(&spec.body, Method::ParityRule, violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::int;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e).unwrap()
    }

    #[test]
    fn rule_examples() {
        let odd = vec![(mi(&[1, 0]), int(1)), (mi(&[3, 0]), int(1))];
        let spec = parity_spec(ParityShape::Difference, 2, &odd);
        assert!(!parity_classify(&spec).unwrap().value);

        let dxx = vec![(mi(&[2, 0]), int(1))];
        assert!(!parity_classify(&parity_spec(ParityShape::Sum, 2, &dxx)).unwrap().value);
        assert!(parity_classify(&parity_spec(ParityShape::Difference, 2, &dxx)).unwrap().value);

        let dx = vec![(mi(&[1, 0]), int(1))];
        let prod = parity_spec(ParityShape::Product, 2, &dx);
        assert!(parity_classify(&prod).unwrap().value);
        assert!(prod.body.is_total_divergence().unwrap());
    }

    #[test]
    fn detection_recovers_operator() {
        let p = vec![(mi(&[0, 0]), int(2)), (mi(&[1, 1]), int(-1))];
        let (shape, q) = detect_parity_shape(&parity_spec(ParityShape::Product, 2, &p)).unwrap();
        assert_eq!(shape, ParityShape::Product);
        assert_eq!(q, p);
        let (shape, q) = detect_parity_shape(&parity_spec(ParityShape::Sum, 2, &p)).unwrap();
        assert_eq!(shape, ParityShape::Sum);
        assert_eq!(q, p);
        let v = parity_classify(&parity_spec(ParityShape::Sum, 2, &p)).unwrap();
        assert!(!v.value && v.witness.unwrap().recheck());
    }

    #[test]
    fn unrelated_body_is_rejected() {
        let s = crate::opdsl::parse(r#"operator "x" { dims 2; functions u: R^1, v: R^1; expr = dx(u)*dy(v); }"#).unwrap();
        assert!(matches!(parity_classify(&s), Err(CriteriaError::ShapeNotDetected(_))));
    }
}
