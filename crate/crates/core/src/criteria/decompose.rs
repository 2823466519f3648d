//! Splitting an operator into pieces that each inherit the zero-integral
//! property: by total derivative order (a scaling argument), and then, for
//! bilinear operators, by the order falling on the first slot (moving
//! derivatives across with exact divergence remainders).

use super::potentials::potential_substitute;
use super::CriteriaError;
use crate::diffpoly::{DiffPolynomial, JetVar, Monomial, TermSelector};
use crate::opdsl::{CoefficientTable, Constraint, OperatorSpec, SlotKind};

/// Graded pieces `(l, spec_l)` with `l` the total derivative order of every
/// term, named `"{name}@l{l}"`; zero levels are omitted.
///
/// Constrained slots are first replaced by their potentials, so for a
/// constrained operator the pieces are unconstrained operators over the
/// potentials (a pointwise `E · B` has no derivatives until `E = ∇ψ` and
/// `B` is written through its divergence-free potential).
pub fn scaling_decompose(spec: &OperatorSpec) -> Vec<(u32, OperatorSpec)> {
    let substituted;
    let base = if spec.functions.iter().any(|f| f.constraint != Constraint::None) {
        match potential_substitute(spec) {
            Ok((s, _)) => {
                substituted = s;
                &substituted
            }
            Err(_) => spec,
        }
    } else {
        spec
    };
    base.body
        .grade_by_order()
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(l, p)| (l, base.with_body(format!("{}@l{}", spec.name, l), p)))
        .collect()
}

/// `body = Σ pieces + Σ_k D_k(remainder_k)`, where every term of the piece
/// `(l₁, l₂)` has `l₁` derivatives on the first slot and `l₂` on the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepDecomposition {
    pub pieces: Vec<((u32, u32), OperatorSpec)>,
    pub remainders: Vec<(usize, DiffPolynomial)>,
}

impl StepDecomposition {
    /// Reassembles the original body.
    pub fn recombine(&self, dim: usize) -> Result<DiffPolynomial, CriteriaError> {
        let mut out = DiffPolynomial::zero(dim);
        for (_, s) in &self.pieces {
            out = out.add(&s.body)?;
        }
        for (k, r) in &self.remainders {
            out = out.add(&r.total_derivative(*k)?)?;
        }
        Ok(out)
    }
}

fn jet_of(table: &CoefficientTable, j: usize, component: usize, index: crate::MultiIndex) -> JetVar {
    let slot = &table.slots()[j];
    let c = match slot.kind {
        SlotKind::Symbol => component,
        SlotKind::Component(i) => i,
    };
    JetVar::new(slot.symbol.clone(), c, index)
}

/// Within each total order `l`, moves derivatives from the second slot onto
/// the first until every term carries the level's largest first-slot order.
pub fn step_decompose(spec: &OperatorSpec) -> Result<StepDecomposition, CriteriaError> {
    let table = CoefficientTable::from_spec(spec)?;
    if table.rank() != 2 {
        return Err(CriteriaError::WrongShape {
            expected: "a bilinear operator".into(),
            found: format!("{} slots", table.rank()),
        });
    }
    let mut body = spec.body.clone();
    let mut remainders = Vec::new();
    let levels: Vec<u32> = body.grade_by_order().keys().copied().collect();
    for l in levels {
        let target = table
            .entries()
            .keys()
            .filter(|k| k.indices[0].order() + k.indices[1].order() == l)
            .map(|k| k.indices[0].order())
            .max()
            .unwrap_or(0);
        loop {
            let current = CoefficientTable::from_spec(&spec.with_body(spec.name.clone(), body.clone()))?;
            let Some(key) = current
                .entries()
                .keys()
                .find(|k| k.indices[0].order() + k.indices[1].order() == l && k.indices[0].order() < target)
            else {
                break;
            };
            let receiver = jet_of(&current, 0, key.components[0], key.indices[0]);
            let donor = jet_of(&current, 1, key.components[1], key.indices[1]);
            let axis = (0..spec.dim).find(|&a| donor.index.get(a) > 0).expect("donor has derivatives left");
            let selector = TermSelector {
                monomial: Monomial::from_vars([receiver.clone(), donor.clone()]),
                donor,
                receiver,
            };
            let step = body.rebalance(&selector, axis)?;
            remainders.extend(step.remainders);
            body = step.replacement;
        }
    }
    let table = CoefficientTable::from_spec(&spec.with_body(spec.name.clone(), body.clone()))?;
    let mut grouped: std::collections::BTreeMap<(u32, u32), Vec<_>> = Default::default();
    for (k, c) in table.entries() {
        grouped
            .entry((k.indices[0].order(), k.indices[1].order()))
            .or_default()
            .push((k.clone(), c.clone()));
    }
    let pieces = grouped
        .into_iter()
        .map(|((l1, l2), entries)| {
            let vars = entries.into_iter().map(|(k, c)| {
                let m = Monomial::from_vars([
                    jet_of(&table, 0, k.components[0], k.indices[0]),
                    jet_of(&table, 1, k.components[1], k.indices[1]),
                ]);
                (m, c)
            });
            let piece = DiffPolynomial::from_terms(spec.dim, spec.symbol_table(), vars).expect("valid terms");
            ((l1, l2), spec.with_body(format!("{}@{}x{}", spec.name, l1, l2), piece))
        })
        .collect();
    Ok(StepDecomposition { pieces, remainders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::zero_integral;
    use crate::opdsl::parse;

    #[test]
    fn levels_of_mixed_operator() {
        let s = parse(r#"operator "m" { dims 2; functions u: R^1, v: R^1; expr = u*v + dx(u)*dy(v); }"#).unwrap();
        let levels: Vec<u32> = scaling_decompose(&s).into_iter().map(|(l, _)| l).collect();
        assert_eq!(levels, vec![0, 2]);
    }

    #[test]
    fn step_pieces_keep_zero_integral() {
        let s = parse(
            r#"operator "s" { dims 2; functions u: R^1, v: R^1;
               expr = u*dxy(v) + dx(u)*dy(v) + dxx(u)*dy(v) + dx(u)*dxy(v); }"#,
        )
        .unwrap();
        assert!(zero_integral(&s).unwrap().value);
        let d = step_decompose(&s).unwrap();
        assert_eq!(d.recombine(2).unwrap(), s.body);
        for ((l1, _), piece) in &d.pieces {
            assert!(*l1 >= 1);
            assert!(zero_integral(piece).unwrap().value, "{}", piece.body);
        }
    }

    #[test]
    fn constrained_operators_decompose_over_potentials() {
        let s = parse(
            r#"operator "eb" { dims 3; functions e: R^3 constraint curl0, b: R^3 constraint div0;
               expr = e[1]*b[1] + e[2]*b[2] + e[3]*b[3]; }"#,
        )
        .unwrap();
        let pieces = scaling_decompose(&s);
        assert_eq!(pieces.iter().map(|(l, _)| *l).collect::<Vec<_>>(), vec![2]);
        assert!(pieces[0].1.functions.iter().all(|f| f.constraint == Constraint::None));
        assert!(zero_integral(&pieces[0].1).unwrap().value);
    }
}
