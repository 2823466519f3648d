//! Total derivatives, the Euler operator, linear substitution and
//! integration-by-parts rebalancing.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{DiffPolyError, DiffPolynomial, JetVar, Monomial, Rational, Symbol};
use crate::multiindex::MultiIndex;

/// Picks one term `c·∏` of a polynomial and two of its factors: the
/// `donor`, which gives up a derivative, and the `receiver`, which gains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermSelector {
    pub monomial: Monomial,
    pub donor: JetVar,
    pub receiver: JetVar,
}

/// `original = replacement + Σ_k D_k(remainder_k)` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rebalanced {
    pub replacement: DiffPolynomial,
    pub remainders: Vec<(usize, DiffPolynomial)>,
    /// Where the selected term went, so rebalancing can be iterated.
    pub moved: TermSelector,
}

impl Rebalanced {
    /// Recombines `replacement + Σ D_k(remainder_k)`.
    pub fn recombine(&self) -> Result<DiffPolynomial, DiffPolyError> {
        let mut out = self.replacement.clone();
        for (axis, r) in &self.remainders {
            out = out.add(&r.total_derivative(*axis)?)?;
        }
        Ok(out)
    }
}

impl DiffPolynomial {
    fn empty_like(&self) -> DiffPolynomial {
        let mut z = DiffPolynomial::zero(self.dim);
        z.symbols = self.symbols.clone();
        z
    }

    fn check_axis(&self, axis: usize) -> Result<(), DiffPolyError> {
        if axis >= self.dim {
            Err(DiffPolyError::AxisOutOfRange { axis, dim: self.dim })
        } else {
            Ok(())
        }
    }

    /// Total derivative `D_axis` (axes are 0-based: `x = 0, y = 1, ...`).
    pub fn total_derivative(&self, axis: usize) -> Result<DiffPolynomial, DiffPolyError> {
        self.check_axis(axis)?;
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            for (v, e) in m.factors() {
                let rest = m.without_one(v).expect("factor present");
                let dv = v.differentiated(axis)?;
                out.add_term(rest.mul(&Monomial::var(dv)), c * Rational::from_integer((*e).into()));
            }
        }
        Ok(out)
    }

    /// `D^α p`.
    pub fn total_derivative_multi(&self, alpha: &MultiIndex) -> Result<DiffPolynomial, DiffPolyError> {
        if alpha.dim() != self.dim {
            return Err(DiffPolyError::DimensionMismatch {
                left: self.dim,
                right: alpha.dim(),
            });
        }
        let mut out = self.clone();
        for axis in 0..self.dim {
            for _ in 0..alpha.get(axis) {
                out = out.total_derivative(axis)?;
            }
        }
        Ok(out)
    }

    /// Partial derivative with respect to a single jet coordinate.
    pub fn partial(&self, var: &JetVar) -> DiffPolynomial {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            let e = m.exponent_of(var);
            if e > 0 {
                let rest = m.without_one(var).expect("factor present");
                out.add_term(rest, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Euler operator `E_i(p) = Σ_α (−1)^{|α|} D^α(∂p/∂u_{i,α})` for
    /// `u = symbol`, `i = component`.
    pub fn euler_operator(&self, symbol: &Symbol, component: usize) -> Result<DiffPolynomial, DiffPolyError> {
        let arity = self
            .arity(symbol)
            .ok_or_else(|| DiffPolyError::UnknownSymbol(symbol.to_string()))?;
        if component == 0 || component > arity {
            return Err(DiffPolyError::ComponentOutOfRange {
                symbol: symbol.to_string(),
                component,
                arity,
            });
        }
        let mut out = self.empty_like();
        for v in self.jet_vars() {
            if &v.symbol != symbol || v.component != component {
                continue;
            }
            let mut piece = self.partial(&v).total_derivative_multi(&v.index)?;
            if v.order() % 2 == 1 {
                piece = piece.neg();
            }
            out = out.add(&piece)?;
        }
        Ok(out)
    }

    /// Euler residuals for every declared `(symbol, component)`, in order.
    pub fn euler_residuals(&self) -> Result<Vec<((Symbol, usize), DiffPolynomial)>, DiffPolyError> {
        let mut out = Vec::new();
        for (s, &arity) in &self.symbols {
            for i in 1..=arity {
                out.push(((s.clone(), i), self.euler_operator(s, i)?));
            }
        }
        Ok(out)
    }

    /// True when every Euler residual vanishes identically, i.e. `p` is a
    /// total divergence.
    pub fn is_total_divergence(&self) -> Result<bool, DiffPolyError> {
        Ok(self.euler_residuals()?.iter().all(|(_, r)| r.is_zero()))
    }

    /// Replaces each listed `(symbol, component)` by a linear differential
    /// expression; jet variables `∂^α u_i` become `D^α(replacement)`.
    ///
    /// A symbol disappears from the symbol table once all of its components
    /// have been replaced.
    pub fn substitute(
        &self,
        replacements: &BTreeMap<(Symbol, usize), DiffPolynomial>,
    ) -> Result<DiffPolynomial, DiffPolyError> {
        let mut symbols = self.symbols.clone();
        for ((s, i), r) in replacements {
            let arity = self
                .arity(s)
                .ok_or_else(|| DiffPolyError::UnknownSymbol(s.to_string()))?;
            if *i == 0 || *i > arity {
                return Err(DiffPolyError::ComponentOutOfRange {
                    symbol: s.to_string(),
                    component: *i,
                    arity,
                });
            }
            if r.dim != self.dim {
                return Err(DiffPolyError::DimensionMismatch {
                    left: self.dim,
                    right: r.dim,
                });
            }
            if r.terms.keys().any(|m| m.degree() > 1) {
                return Err(DiffPolyError::NonlinearReplacement(format!("{s}[{i}]")));
            }
        }
        let replaced: BTreeSet<&Symbol> = replacements.keys().map(|(s, _)| s).collect();
        for s in replaced {
            let arity = self.symbols[s];
            if (1..=arity).all(|i| replacements.contains_key(&(s.clone(), i))) {
                symbols.remove(s);
            }
        }
        let mut target = DiffPolynomial {
            dim: self.dim,
            symbols,
            terms: BTreeMap::new(),
        };
        for r in replacements.values() {
            target.symbols = target.merged_symbols(r)?;
        }

        let mut cache: BTreeMap<JetVar, DiffPolynomial> = BTreeMap::new();
        let mut out = target.clone();
        for (m, c) in &self.terms {
            let mut term = DiffPolynomial::constant(self.dim, c.clone());
            term.symbols = target.symbols.clone();
            for (v, e) in m.factors() {
                let factor = match replacements.get(&(v.symbol.clone(), v.component)) {
                    Some(r) => {
                        if !cache.contains_key(v) {
                            cache.insert(v.clone(), r.total_derivative_multi(&v.index)?);
                        }
                        cache[v].clone()
                    }
                    None => {
                        let mut p = target.clone();
                        p.add_term(Monomial::var(v.clone()), Rational::one());
                        p
                    }
                };
                term = term.mul(&factor.pow(*e)?)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Moves one derivative along `axis` from the selected donor factor to
    /// the receiver factor:
    /// `c·∂^α u·∂^β v = −c·∂^{α+e_k}u·∂^{β−e_k}v + D_k(c·∂^α u·∂^{β−e_k}v)`
    /// (up to the other factors of the monomial, which the total derivative
    /// also hits).
    pub fn rebalance(&self, selector: &TermSelector, axis: usize) -> Result<Rebalanced, DiffPolyError> {
        self.check_axis(axis)?;
        let c = self.coefficient(&selector.monomial);
        if c.is_zero() {
            return Err(DiffPolyError::InvalidSelector("monomial not present".into()));
        }
        let rest = selector
            .monomial
            .without_one(&selector.donor)
            .ok_or_else(|| DiffPolyError::InvalidSelector("donor is not a factor".into()))?;
        let others = rest
            .without_one(&selector.receiver)
            .ok_or_else(|| DiffPolyError::InvalidSelector("receiver is not a factor".into()))?;
        let lowered = JetVar {
            index: selector.donor.index.decremented(axis).ok_or_else(|| {
                DiffPolyError::InvalidSelector(format!("donor has no derivative along axis {axis}"))
            })?,
            ..selector.donor.clone()
        };
        let raised = selector.receiver.differentiated(axis)?;

        let mut remainder = self.empty_like();
        remainder.add_term(rest.mul(&Monomial::var(lowered.clone())), c);
        let replacement = self.sub(&remainder.total_derivative(axis)?)?;
        let moved_monomial = others.mul(&Monomial::from_vars([lowered.clone(), raised.clone()]));
        Ok(Rebalanced {
            replacement,
            remainders: vec![(axis, remainder)],
            moved: TermSelector {
                monomial: moved_monomial,
                donor: lowered,
                receiver: raised,
            },
        })
    }

    /// Repeats [`rebalance`](Self::rebalance) until the receiver carries
    /// `target_order` derivatives, always using the first axis on which the
    /// donor still has a derivative.
    pub fn rebalance_to_order(&self, selector: &TermSelector, target_order: u32) -> Result<Rebalanced, DiffPolyError> {
        if target_order < selector.receiver.order()
            || target_order - selector.receiver.order() > selector.donor.order()
        {
            return Err(DiffPolyError::InvalidSelector(format!(
                "cannot move derivatives to reach receiver order {target_order}"
            )));
        }
        let mut current = Rebalanced {
            replacement: self.clone(),
            remainders: Vec::new(),
            moved: selector.clone(),
        };
        while current.moved.receiver.order() < target_order {
            let axis = (0..self.dim)
                .find(|&k| current.moved.donor.index.get(k) > 0)
                .expect("donor order checked above");
            let step = current.replacement.rebalance(&current.moved, axis)?;
            current.remainders.extend(step.remainders);
            current.replacement = step.replacement;
            current.moved = step.moved;
        }
        Ok(current)
    }
}
