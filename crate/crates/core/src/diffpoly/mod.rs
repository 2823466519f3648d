//! Exact polynomials in jet variables `u_{i,α} = ∂^α u_i`.
//!
//! A [`DiffPolynomial`] is kept in canonical form at all times: monomials are
//! stored in a `BTreeMap` keyed by their sorted factor multiset and zero
//! coefficients are never stored, so structural equality is polynomial
//! identity. Coefficients are arbitrary-precision rationals.

mod calculus;
pub(crate) mod render;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::multiindex::{MultiIndex, MultiIndexError};

pub use calculus::{Rebalanced, TermSelector};

/// Exact rational coefficient.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffPolyError {
    #[error("symbol `{symbol}` declared with arity {left} and {right}")]
    SymbolClash {
        symbol: String,
        left: usize,
        right: usize,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("undeclared symbol `{0}`")]
    UnknownSymbol(String),
    #[error("component {component} of `{symbol}` outside 1..={arity}")]
    ComponentOutOfRange {
        symbol: String,
        component: usize,
        arity: usize,
    },
    #[error("axis {axis} outside 0..{dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("replacement for `{0}` is not linear")]
    NonlinearReplacement(String),
    #[error("no value assigned to jet variable {0}")]
    MissingAssignment(JetVar),
    #[error("invalid term selector: {0}")]
    InvalidSelector(String),
    #[error(transparent)]
    MultiIndex(#[from] MultiIndexError),
}

/// Name of an unknown function (`u`, `v`, `E`, `Phi`, ...).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// The jet coordinate `∂^index symbol_component`. Components are 1-based.
///
/// Ordered by `(symbol, component, index)` with graded-lex order on the index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JetVar {
    pub symbol: Symbol,
    pub component: usize,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn new(symbol: impl Into<Symbol>, component: usize, index: MultiIndex) -> Self {
        JetVar {
            symbol: symbol.into(),
            component,
            index,
        }
    }

    pub fn order(&self) -> u32 {
        self.index.order()
    }

    /// Same variable differentiated once more along `axis`.
    pub fn differentiated(&self, axis: usize) -> Result<Self, MultiIndexError> {
        Ok(JetVar {
            symbol: self.symbol.clone(),
            component: self.component,
            index: self.index.incremented(axis)?,
        })
    }
}

/// A sorted multiset of jet variables with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial {
    factors: Vec<(JetVar, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: JetVar) -> Self {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    /// Builds a monomial from an unsorted list of factors (repetition allowed).
    pub fn from_vars<I: IntoIterator<Item = JetVar>>(vars: I) -> Self {
        let mut m = Monomial::one();
        for v in vars {
            m = m.mul(&Monomial::var(v));
        }
        m
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.factors
    }

    /// Factors with multiplicity, in canonical order.
    pub fn expanded(&self) -> Vec<&JetVar> {
        self.factors
            .iter()
            .flat_map(|(v, e)| std::iter::repeat_n(v, *e as usize))
            .collect()
    }

    /// Number of factors counted with multiplicity.
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    /// Total derivative order `Σ e·|α|`.
    pub fn order(&self) -> u32 {
        self.factors.iter().map(|(v, e)| e * v.order()).sum()
    }

    pub fn exponent_of(&self, v: &JetVar) -> u32 {
        self.factors
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, b) = (&self.factors[i], &other.factors[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0.clone(), a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    /// Removes one occurrence of `v`; `None` when `v` does not occur.
    pub fn without_one(&self, v: &JetVar) -> Option<Monomial> {
        let i = self.factors.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let mut factors = self.factors.clone();
        if factors[i].1 == 1 {
            factors.remove(i);
        } else {
            factors[i].1 -= 1;
        }
        Some(Monomial { factors })
    }

    pub fn vars(&self) -> impl Iterator<Item = &JetVar> {
        self.factors.iter().map(|(v, _)| v)
    }
}

/// Degree information returned by [`DiffPolynomial::homogeneity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Homogeneity {
    pub degree: u32,
    pub is_homogeneous: bool,
}

/// Polynomial in jet variables with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffPolynomial {
    dim: usize,
    symbols: BTreeMap<Symbol, usize>,
    terms: BTreeMap<Monomial, Rational>,
}

impl DiffPolynomial {
    pub fn zero(dim: usize) -> Self {
        DiffPolynomial {
            dim,
            symbols: BTreeMap::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(Monomial::one(), c);
        p
    }

    /// The single jet variable `∂^index symbol_component`, declaring
    /// `symbol` with the given arity.
    pub fn jet(
        dim: usize,
        symbol: &str,
        arity: usize,
        component: usize,
        index: MultiIndex,
    ) -> Result<Self, DiffPolyError> {
        if index.dim() != dim {
            return Err(DiffPolyError::DimensionMismatch {
                left: dim,
                right: index.dim(),
            });
        }
        if component == 0 || component > arity {
            return Err(DiffPolyError::ComponentOutOfRange {
                symbol: symbol.to_string(),
                component,
                arity,
            });
        }
        let mut p = Self::zero(dim);
        p.symbols.insert(Symbol::new(symbol), arity);
        p.add_term(Monomial::var(JetVar::new(symbol, component, index)), Rational::one());
        Ok(p)
    }

    /// Builds a polynomial from raw terms; every symbol used must be declared
    /// in `symbols`.
    pub fn from_terms<I>(dim: usize, symbols: BTreeMap<Symbol, usize>, terms: I) -> Result<Self, DiffPolyError>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = DiffPolynomial {
            dim,
            symbols,
            terms: BTreeMap::new(),
        };
        for (m, c) in terms {
            for v in m.vars() {
                p.check_var(v)?;
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn check_var(&self, v: &JetVar) -> Result<(), DiffPolyError> {
        let arity = *self
            .symbols
            .get(&v.symbol)
            .ok_or_else(|| DiffPolyError::UnknownSymbol(v.symbol.to_string()))?;
        if v.component == 0 || v.component > arity {
            return Err(DiffPolyError::ComponentOutOfRange {
                symbol: v.symbol.to_string(),
                component: v.component,
                arity,
            });
        }
        if v.index.dim() != self.dim {
            return Err(DiffPolyError::DimensionMismatch {
                left: self.dim,
                right: v.index.dim(),
            });
        }
        Ok(())
    }

    /// Adds `symbol` with `arity` to the symbol table.
    pub fn declare(&mut self, symbol: &str, arity: usize) -> Result<(), DiffPolyError> {
        match self.symbols.get(&Symbol::new(symbol)) {
            Some(&a) if a != arity => Err(DiffPolyError::SymbolClash {
                symbol: symbol.to_string(),
                left: a,
                right: arity,
            }),
            _ => {
                self.symbols.insert(Symbol::new(symbol), arity);
                Ok(())
            }
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symbols(&self) -> &BTreeMap<Symbol, usize> {
        &self.symbols
    }

    pub fn arity(&self, symbol: &Symbol) -> Option<usize> {
        self.symbols.get(symbol).copied()
    }

    /// Canonically ordered `(monomial, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order appearing for each symbol.
    pub fn max_orders(&self) -> BTreeMap<Symbol, u32> {
        let mut out = BTreeMap::new();
        for m in self.terms.keys() {
            for v in m.vars() {
                let e = out.entry(v.symbol.clone()).or_insert(0);
                *e = (*e).max(v.order());
            }
        }
        out
    }

    /// Every jet variable occurring in some monomial.
    pub fn jet_vars(&self) -> Vec<JetVar> {
        let mut out: Vec<JetVar> = self.terms.keys().flat_map(|m| m.vars().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }

    fn merged_symbols(&self, other: &Self) -> Result<BTreeMap<Symbol, usize>, DiffPolyError> {
        if self.dim != other.dim {
            return Err(DiffPolyError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut out = self.symbols.clone();
        for (s, &a) in &other.symbols {
            match out.get(s) {
                Some(&b) if a != b => {
                    return Err(DiffPolyError::SymbolClash {
                        symbol: s.to_string(),
                        left: b,
                        right: a,
                    })
                }
                _ => {
                    out.insert(s.clone(), a);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, DiffPolyError> {
        let symbols = self.merged_symbols(other)?;
        let mut out = self.clone();
        out.symbols = symbols;
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DiffPolyError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, DiffPolyError> {
        let symbols = self.merged_symbols(other)?;
        let mut out = DiffPolynomial {
            dim: self.dim,
            symbols,
            terms: BTreeMap::new(),
        };
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, DiffPolyError> {
        let mut out = Self::constant(self.dim, Rational::one());
        out.symbols = self.symbols.clone();
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.dim);
        out.symbols = self.symbols.clone();
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Splits `p = Σ_l p_l` by total derivative order of the monomials.
    pub fn grade_by_order(&self) -> BTreeMap<u32, DiffPolynomial> {
        let mut out: BTreeMap<u32, DiffPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.order())
                .or_insert_with(|| {
                    let mut z = Self::zero(self.dim);
                    z.symbols = self.symbols.clone();
                    z
                })
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Largest monomial degree and whether all monomials share it. The zero
    /// polynomial is homogeneous of degree 0.
    pub fn homogeneity(&self) -> Homogeneity {
        let degree = self.terms.keys().map(Monomial::degree).max().unwrap_or(0);
        Homogeneity {
            degree,
            is_homogeneous: self.terms.keys().all(|m| m.degree() == degree),
        }
    }

    /// Exact value at a jet point.
    pub fn evaluate_at_jet(&self, assignment: &BTreeMap<JetVar, Rational>) -> Result<Rational, DiffPolyError> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.factors() {
                let val = assignment
                    .get(v)
                    .ok_or_else(|| DiffPolyError::MissingAssignment(v.clone()))?;
                for _ in 0..*e {
                    term *= val;
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Restricts the symbol table to symbols that actually occur, keeping
    /// those listed in `keep`.
    pub fn with_symbol_table(&self, symbols: BTreeMap<Symbol, usize>) -> Result<Self, DiffPolyError> {
        Self::from_terms(self.dim, symbols, self.terms.clone())
    }
}


#[cfg(test)]
mod tests {
    use super::test_util::*;
    use super::*;

    #[test]
    fn ring_examples() {
        let ux = var("u", 1, 1, &[1, 0]);
        let vy = var("v", 1, 1, &[0, 1]);
        let uv = ux.mul(&vy).unwrap();
        assert!(uv.add(&uv.neg()).unwrap().is_zero());

        let sq = ux.mul(&ux).unwrap();
        let (m, c) = sq.terms().next().unwrap();
        assert_eq!(m.factors(), &[(jv("u", 1, &[1, 0]), 2)]);
        assert_eq!(c, &int(1));

        let uxx = var("u", 1, 1, &[2, 0]);
        assert_eq!(uxx.scale(&int(2)).scale(&rat(1, 2)), uxx);
    }

    #[test]
    fn symbol_clash() {
        let a = var("u", 1, 1, &[1, 0]);
        let b = var("u", 2, 1, &[1, 0]);
        assert!(matches!(a.add(&b), Err(DiffPolyError::SymbolClash { .. })));
        assert!(matches!(a.mul(&b), Err(DiffPolyError::SymbolClash { .. })));
    }

    #[test]
    fn grading() {
        let u = var("u", 1, 1, &[0, 0]);
        let v = var("v", 1, 1, &[0, 0]);
        let ux = var("u", 1, 1, &[1, 0]);
        let vy = var("v", 1, 1, &[0, 1]);
        let vx = var("v", 1, 1, &[1, 0]);
        let uxx = var("u", 1, 1, &[2, 0]);
        let p = u.mul(&v).unwrap().add(&ux.mul(&vy).unwrap()).unwrap();
        let g = p.grade_by_order();
        assert_eq!(g.keys().copied().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(g[&0], u.mul(&v).unwrap().with_symbol_table(p.symbols().clone()).unwrap());

        let q = u.mul(&vx).unwrap().add(&uxx.mul(&vy).unwrap()).unwrap();
        assert_eq!(q.grade_by_order().keys().copied().collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn homogeneity_examples() {
        let ux = var("u", 1, 1, &[1, 0]);
        let vy = var("v", 1, 1, &[0, 1]);
        let u = var("u", 1, 1, &[0, 0]);
        let p = ux.mul(&vy).unwrap().add(&u).unwrap();
        assert_eq!(
            p.homogeneity(),
            Homogeneity {
                degree: 2,
                is_homogeneous: false
            }
        );
        assert_eq!(
            DiffPolynomial::zero(2).homogeneity(),
            Homogeneity {
                degree: 0,
                is_homogeneous: true
            }
        );
    }

    #[test]
    fn evaluation() {
        let ux = var("u", 1, 1, &[1, 0]);
        let vy = var("v", 1, 1, &[0, 1]);
        let p = ux.mul(&vy).unwrap();
        let mut a = BTreeMap::new();
        a.insert(jv("u", 1, &[1, 0]), int(2));
        a.insert(jv("v", 1, &[0, 1]), int(3));
        assert_eq!(p.evaluate_at_jet(&a).unwrap(), int(6));
        assert_eq!(DiffPolynomial::zero(2).evaluate_at_jet(&a).unwrap(), int(0));
        a.remove(&jv("v", 1, &[0, 1]));
        assert!(matches!(p.evaluate_at_jet(&a), Err(DiffPolyError::MissingAssignment(_))));
    }
}
