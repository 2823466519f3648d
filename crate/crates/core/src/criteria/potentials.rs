//! Replacing constrained slots by potentials: a curl-free field is `∇Ψ`, a
//! divergence-free field is `B(Φ)` with
//! `B(Φ)_j = Σ_{i<j} (−1)^{i+j} ∂_i Φ_{ij} + Σ_{i>j} (−1)^{i+j+1} ∂_i Φ_{ji}`
//! for `Φ` with one component per pair `i < j`.

use std::collections::BTreeMap;

use num_traits::One;

use super::CriteriaError;
use crate::diffpoly::{DiffPolynomial, Rational, Symbol};
use crate::multiindex::MultiIndex;
use crate::opdsl::{Constraint, FunctionDecl, OperatorSpec};

/// Where each constrained symbol went: `(potential symbol, constraint)`.
pub type PotentialMap = BTreeMap<Symbol, (Symbol, Constraint)>;

/// 1-based component of `Φ` holding the pair `i < j` (both 1-based), in the
/// order `(1,2), (1,3), …, (1,n), (2,3), …`.
pub fn pair_component(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    let before: usize = (1..i).map(|a| n - a).sum();
    before + (j - i)
}

/// `B(Φ)_j` as a linear polynomial in the jets of `phi`.
pub fn div_potential_component(n: usize, phi: &str, j: usize) -> DiffPolynomial {
    let arity = n * (n - 1) / 2;
    let mut out = DiffPolynomial::zero(n);
    if arity > 0 {
        out.declare(phi, arity).expect("fresh symbol");
    }
    for i in 1..=n {
        if i == j {
            continue;
        }
        let (comp, sign) = if i < j {
            (pair_component(n, i, j), (i + j).is_multiple_of(2))
        } else {
            (pair_component(n, j, i), (i + j + 1).is_multiple_of(2))
        };
        let d = MultiIndex::unit(n, i - 1).expect("axis in range");
        let jet = DiffPolynomial::jet(n, phi, arity, comp, d).expect("valid jet");
        let term = if sign { jet } else { jet.neg() };
        out = out.add(&term).expect("same symbol table");
    }
    out
}

/// `(∇Ψ)_j`.
pub fn curl_potential_component(n: usize, psi: &str, j: usize) -> DiffPolynomial {
    DiffPolynomial::jet(n, psi, 1, 1, MultiIndex::unit(n, j - 1).expect("axis in range")).expect("valid jet")
}

fn fresh_name(base: &str, suffix: &str, taken: &BTreeMap<Symbol, usize>) -> String {
    let mut name = format!("{base}_{suffix}");
    while taken.contains_key(&Symbol::new(&name)) {
        name.push('_');
    }
    name
}

/// Unconstrained spec over fresh potentials, with the body substituted.
pub fn potential_substitute(spec: &OperatorSpec) -> Result<(OperatorSpec, PotentialMap), CriteriaError> {
    let n = spec.dim;
    let mut taken = spec.symbol_table();
    let mut replacements = BTreeMap::new();
    let mut functions = Vec::new();
    let mut map = PotentialMap::new();
    for f in &spec.functions {
        match f.constraint {
            Constraint::None => functions.push(f.clone()),
            Constraint::Div0 => {
                let name = fresh_name(f.name.as_str(), "phi", &taken);
                let arity = n * (n - 1) / 2;
                for j in 1..=n {
                    replacements.insert((f.name.clone(), j), div_potential_component(n, &name, j));
                }
                if arity > 0 {
                    taken.insert(Symbol::new(&name), arity);
                    functions.push(FunctionDecl {
                        name: Symbol::new(&name),
                        arity,
                        constraint: Constraint::None,
                    });
                }
                map.insert(f.name.clone(), (Symbol::new(&name), Constraint::Div0));
            }
            Constraint::Curl0 => {
                let name = fresh_name(f.name.as_str(), "psi", &taken);
                for j in 1..=n {
                    replacements.insert((f.name.clone(), j), curl_potential_component(n, &name, j));
                }
                taken.insert(Symbol::new(&name), 1);
                functions.push(FunctionDecl {
                    name: Symbol::new(&name),
                    arity: 1,
                    constraint: Constraint::None,
                });
                map.insert(f.name.clone(), (Symbol::new(&name), Constraint::Curl0));
            }
        }
    }
    let body = spec.body.substitute(&replacements)?;
    let symbols: BTreeMap<Symbol, usize> = functions.iter().map(|f| (f.name.clone(), f.arity)).collect();
    let body = body.with_symbol_table(symbols)?;
    let out = OperatorSpec {
        name: format!("{}/potentials", spec.name),
        dim: n,
        functions,
        exponents: spec.exponents.clone(),
        body,
        expectations: BTreeMap::new(),
    };
    Ok((out, map))
}

/// `Σ_j ∂_j B(Φ)_j`, which vanishes identically; exposed for tests.
pub fn divergence_of_div_potential(n: usize) -> DiffPolynomial {
    let mut out = DiffPolynomial::zero(n);
    for j in 1..=n {
        let d = div_potential_component(n, "Phi", j).total_derivative(j - 1).expect("axis in range");
        out = out.add(&d).expect("same symbols");
    }
    out.scale(&Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opdsl::parse;

    #[test]
    fn two_dimensional_stream_function() {
        assert_eq!(div_potential_component(2, "Phi", 1).to_string(), "dy(Phi)");
        assert_eq!(div_potential_component(2, "Phi", 2).to_string(), "-dx(Phi)");
    }

    #[test]
    fn potentials_are_divergence_free() {
        for n in 2..=5 {
            assert!(divergence_of_div_potential(n).is_zero(), "n = {n}");
        }
        assert_eq!(pair_component(4, 1, 2), 1);
        assert_eq!(pair_component(4, 1, 4), 3);
        assert_eq!(pair_component(4, 2, 3), 4);
        assert_eq!(pair_component(4, 3, 4), 6);
    }

    #[test]
    fn div_curl_substitution() {
        let s = parse(
            r#"operator "eb" { dims 3; functions E: R^3 constraint div0, B: R^3 constraint curl0;
               expr = E[1]*B[1] + E[2]*B[2] + E[3]*B[3]; }"#,
        )
        .unwrap();
        let (sub, map) = potential_substitute(&s).unwrap();
        assert_eq!(map.len(), 2);
        assert!(!sub.is_constrained());
        assert_eq!(sub.functions.len(), 2);
        assert!(sub.body.is_total_divergence().unwrap());
    }
}
