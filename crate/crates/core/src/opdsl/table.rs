//! Coefficient tables `(ν, Θ) → C` for multilinear bodies.
//!
//! A body is multilinear when every monomial contains exactly one factor from
//! each slot. Slots are tried first as whole symbols (`B(u, v)` with
//! `u: R^m₁`, `v: R^m₂`) and then as individual components (e.g. the
//! Jacobian of `u: R^n`, which is multilinear in `u_1, …, u_n`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use super::{Constraint, OperatorSpec};
use crate::diffpoly::{DiffPolynomial, JetVar, Monomial, Rational, Symbol};
use crate::multiindex::MultiIndex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("body is not multilinear: monomial `{monomial}` {reason}")]
    NotMultilinear { monomial: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    /// All components of the symbol belong to the slot.
    Symbol,
    /// A single component of a vector symbol.
    Component(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub symbol: Symbol,
    pub kind: SlotKind,
    /// Components available in this slot (`m_j`); 1 for component slots.
    pub arity: usize,
    pub constraint: Constraint,
}

impl Slot {
    fn owns(&self, v: &JetVar) -> bool {
        v.symbol == self.symbol
            && match self.kind {
                SlotKind::Symbol => true,
                SlotKind::Component(i) => v.component == i,
            }
    }

    /// Component index of `v` within the slot (1-based).
    fn local_component(&self, v: &JetVar) -> usize {
        match self.kind {
            SlotKind::Symbol => v.component,
            SlotKind::Component(_) => 1,
        }
    }

    fn global_component(&self, local: usize) -> usize {
        match self.kind {
            SlotKind::Symbol => local,
            SlotKind::Component(i) => i,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SlotKind::Symbol => write!(f, "{}", self.symbol),
            SlotKind::Component(i) => write!(f, "{}[{}]", self.symbol, i),
        }
    }
}

/// Key `(ν, Θ)`: one component and one multi-index per slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TableKey {
    pub components: Vec<usize>,
    pub indices: Vec<MultiIndex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    dim: usize,
    slots: Vec<Slot>,
    entries: BTreeMap<TableKey, Rational>,
    symbols: BTreeMap<Symbol, usize>,
}

impl CoefficientTable {
    pub fn from_spec(spec: &OperatorSpec) -> Result<Self, TableError> {
        let symbol_slots: Vec<Slot> = spec
            .functions
            .iter()
            .map(|f| Slot {
                symbol: f.name.clone(),
                kind: SlotKind::Symbol,
                arity: f.arity,
                constraint: f.constraint,
            })
            .collect();
        let first_error = match Self::with_slots(spec, symbol_slots) {
            Ok(t) => return Ok(t),
            Err(e) => e,
        };
        let component_slots: Vec<Slot> = spec
            .functions
            .iter()
            .flat_map(|f| {
                (1..=f.arity).map(move |i| Slot {
                    symbol: f.name.clone(),
                    kind: SlotKind::Component(i),
                    arity: 1,
                    constraint: f.constraint,
                })
            })
            .collect();
        if spec.functions.iter().any(|f| f.arity > 1) {
            if let Ok(t) = Self::with_slots(spec, component_slots) {
                return Ok(t);
            }
        }
        Err(first_error)
    }

    fn with_slots(spec: &OperatorSpec, slots: Vec<Slot>) -> Result<Self, TableError> {
        let mut entries = BTreeMap::new();
        for (m, c) in spec.body.terms() {
            let key = Self::key_for(&spec.body, m, &slots)?;
            entries.insert(key, c.clone());
        }
        Ok(CoefficientTable {
            dim: spec.dim,
            slots,
            entries,
            symbols: spec.symbol_table(),
        })
    }

    fn key_for(body: &DiffPolynomial, m: &Monomial, slots: &[Slot]) -> Result<TableKey, TableError> {
        let mut components = vec![0usize; slots.len()];
        let mut indices: Vec<Option<MultiIndex>> = vec![None; slots.len()];
        let fail = |reason: String| TableError::NotMultilinear {
            monomial: body.render_monomial(m),
            reason,
        };
        if m.factors().is_empty() {
            return Err(fail("is a constant".into()));
        }
        for v in m.expanded() {
            let j = slots
                .iter()
                .position(|s| s.owns(v))
                .ok_or_else(|| fail(format!("uses `{}` outside every slot", v.symbol)))?;
            if indices[j].is_some() {
                return Err(fail(format!("touches slot `{}` more than once", slots[j])));
            }
            components[j] = slots[j].local_component(v);
            indices[j] = Some(v.index);
        }
        let indices = indices
            .into_iter()
            .enumerate()
            .map(|(j, i)| i.ok_or_else(|| fail(format!("does not touch slot `{}`", slots[j]))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TableKey { components, indices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Number of slots `r`.
    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn entries(&self) -> &BTreeMap<TableKey, Rational> {
        &self.entries
    }

    pub fn coefficient(&self, key: &TableKey) -> Rational {
        self.entries.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Derivative orders occurring in slot `j`.
    pub fn slot_orders(&self, j: usize) -> BTreeSet<u32> {
        self.entries.keys().map(|k| k.indices[j].order()).collect()
    }

    /// `k_j = max |α^j|`.
    pub fn max_order(&self, j: usize) -> u32 {
        self.slot_orders(j).into_iter().max().unwrap_or(0)
    }

    /// Every slot carries a single derivative order in all terms.
    pub fn is_slot_homogeneous(&self) -> bool {
        (0..self.rank()).all(|j| self.slot_orders(j).len() <= 1)
    }

    pub fn is_unconstrained(&self) -> bool {
        self.slots.iter().all(|s| s.constraint == Constraint::None)
    }

    /// Rebuilds the body; the inverse of [`from_spec`](Self::from_spec).
    pub fn to_body(&self) -> DiffPolynomial {
        let terms = self.entries.iter().map(|(k, c)| {
            let vars = self.slots.iter().enumerate().map(|(j, s)| {
                JetVar::new(s.symbol.clone(), s.global_component(k.components[j]), k.indices[j])
            });
            (Monomial::from_vars(vars), c.clone())
        });
        DiffPolynomial::from_terms(self.dim, self.symbols.clone(), terms).expect("table keys are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use crate::diffpoly::int;

    #[test]
    fn examples() {
        let j = parse(r#"operator "j" { dims 2; functions u: R^2; expr = dx(u[1])*dy(u[2]) - dy(u[1])*dx(u[2]); }"#)
            .unwrap();
        let t = CoefficientTable::from_spec(&j).unwrap();
        assert_eq!(t.rank(), 2);
        let mut cs: Vec<_> = t.entries().values().cloned().collect();
        cs.sort();
        assert_eq!(cs, vec![int(-1), int(1)]);
        assert_eq!(t.to_body(), j.body);
        assert!(t.is_slot_homogeneous());

        let ma = parse(
            r#"operator "ma" { dims 2; functions u: R^1, v: R^1; expr = dxx(u)*dyy(v) + dyy(u)*dxx(v) - 2*dxy(u)*dxy(v); }"#,
        )
        .unwrap();
        let t = CoefficientTable::from_spec(&ma).unwrap();
        assert_eq!(t.entries().len(), 3);
        assert_eq!(t.slots()[0].kind, SlotKind::Symbol);
        assert_eq!(t.to_body(), ma.body);

        let sq = parse(r#"operator "sq" { dims 2; functions u: R^1; expr = dx(u)^2; }"#).unwrap();
        match CoefficientTable::from_spec(&sq) {
            Err(TableError::NotMultilinear { monomial, .. }) => assert_eq!(monomial, "dx(u)^2"),
            other => panic!("{other:?}"),
        }
    }
}
