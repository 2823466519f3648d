//! Multi-indices `α ∈ ℕ₀ⁿ` and tuples of them.
//!
//! The total order used everywhere (enumeration, jet-variable ordering, report
//! output) is *graded lexicographic*: first by order `|α|`, then by exponent
//! vectors in descending lexicographic order, so that in two dimensions
//! `(0,0) < (1,0) < (0,1) < (2,0) < (1,1) < (0,2) < ...`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 8;
/// Largest supported order of a single multi-index.
pub const MAX_ORDER: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultiIndexError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {0} outside 1..={MAX_DIM}")]
    UnsupportedDimension(usize),
    #[error("order {0} exceeds the cap {MAX_ORDER}")]
    OrderTooLarge(u32),
    #[error("tuple length mismatch: {left} vs {right}")]
    TupleLengthMismatch { left: usize, right: usize },
    #[error("empty multi-index tuple")]
    EmptyTuple,
    #[error("malformed multi-index `{0}`")]
    Malformed(String),
}

/// Exponent vector of a mixed partial derivative `∂^α`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    dim: u8,
    exps: [u8; MAX_DIM],
}

impl MultiIndex {
    pub fn zero(dim: usize) -> Result<Self, MultiIndexError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(MultiIndexError::UnsupportedDimension(dim));
        }
        Ok(MultiIndex {
            dim: dim as u8,
            exps: [0; MAX_DIM],
        })
    }

    pub fn new(exps: &[u32]) -> Result<Self, MultiIndexError> {
        let mut out = Self::zero(exps.len())?;
        let order: u32 = exps.iter().sum();
        if order > MAX_ORDER {
            return Err(MultiIndexError::OrderTooLarge(order));
        }
        for (slot, &e) in out.exps.iter_mut().zip(exps) {
            *slot = e as u8;
        }
        Ok(out)
    }

    /// The unit index `e_axis` (0-based axis).
    pub fn unit(dim: usize, axis: usize) -> Result<Self, MultiIndexError> {
        let mut out = Self::zero(dim)?;
        if axis >= dim {
            return Err(MultiIndexError::DimensionMismatch {
                left: dim,
                right: axis + 1,
            });
        }
        out.exps[axis] = 1;
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps[..self.dim as usize]
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.exps[axis] as u32
    }

    /// `|α|`.
    pub fn order(&self) -> u32 {
        self.exponents().iter().map(|&e| e as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.order() == 0
    }

    fn check_dim(&self, other: &Self) -> Result<(), MultiIndexError> {
        if self.dim != other.dim {
            Err(MultiIndexError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, MultiIndexError> {
        self.check_dim(other)?;
        let order = self.order() + other.order();
        if order > MAX_ORDER {
            return Err(MultiIndexError::OrderTooLarge(order));
        }
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a += *b;
        }
        Ok(out)
    }

    /// `self − other`, or `None` when `other ≤ self` fails.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.dim != other.dim {
            return None;
        }
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(out)
    }

    /// `α + e_axis`.
    pub fn incremented(&self, axis: usize) -> Result<Self, MultiIndexError> {
        if axis >= self.dim() {
            return Err(MultiIndexError::DimensionMismatch {
                left: self.dim(),
                right: axis + 1,
            });
        }
        if self.order() + 1 > MAX_ORDER {
            return Err(MultiIndexError::OrderTooLarge(self.order() + 1));
        }
        let mut out = *self;
        out.exps[axis] += 1;
        Ok(out)
    }

    /// `α − e_axis`, or `None` when the exponent on `axis` is zero.
    pub fn decremented(&self, axis: usize) -> Option<Self> {
        if axis >= self.dim() || self.exps[axis] == 0 {
            return None;
        }
        let mut out = *self;
        out.exps[axis] -= 1;
        Some(out)
    }

    /// Componentwise partial order `self ≤ other`.
    pub fn leq(&self, other: &Self) -> Result<bool, MultiIndexError> {
        self.check_dim(other)?;
        Ok(self.exponents().iter().zip(other.exponents()).all(|(a, b)| a <= b))
    }

    pub fn strict_lt(&self, other: &Self) -> Result<bool, MultiIndexError> {
        Ok(self.leq(other)? && self != other)
    }

    /// `self!` as the product of componentwise factorials.
    pub fn factorial(&self) -> BigInt {
        self.exponents()
            .iter()
            .map(|&e| (1..=e as u32).fold(BigInt::one(), |acc, k| acc * k))
            .product()
    }

    /// Iterates over all `β ≤ self` in graded-lex order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(self.dim()).unwrap()];
        for axis in 0..self.dim() {
            let mut next = Vec::with_capacity(out.len() * (self.exps[axis] as usize + 1));
            for base in &out {
                for e in 0..=self.exps[axis] {
                    let mut b = *base;
                    b.exps[axis] = e;
                    next.push(b);
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

/// Product of componentwise binomial coefficients `(top choose bottom)`;
/// zero unless `bottom ≤ top`.
pub fn binomial(top: &MultiIndex, bottom: &MultiIndex) -> Result<BigInt, MultiIndexError> {
    top.check_dim(bottom)?;
    let mut acc = BigInt::one();
    for (&t, &b) in top.exponents().iter().zip(bottom.exponents()) {
        if b > t {
            return Ok(BigInt::from(0));
        }
        acc *= scalar_binomial(t as u64, b as u64);
    }
    Ok(acc)
}

pub(crate) fn scalar_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Whether [`enumerate`] lists indices of exactly order `k` or all orders `≤ k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    Exact,
    UpTo,
}

/// All multi-indices of dimension `dim` with order `k` (or `≤ k`), in
/// graded-lex order.
pub fn enumerate(dim: usize, k: u32, mode: EnumerationMode) -> Result<Vec<MultiIndex>, MultiIndexError> {
    if dim == 0 || dim > MAX_DIM {
        return Err(MultiIndexError::UnsupportedDimension(dim));
    }
    if k > MAX_ORDER {
        return Err(MultiIndexError::OrderTooLarge(k));
    }
    let orders: Vec<u32> = match mode {
        EnumerationMode::Exact => vec![k],
        EnumerationMode::UpTo => (0..=k).collect(),
    };
    let mut out = Vec::new();
    for order in orders {
        let mut exps = vec![0u32; dim];
        compositions(order, 0, &mut exps, &mut out);
    }
    Ok(out)
}

// Emits exponent vectors in descending lexicographic order.
fn compositions(remaining: u32, axis: usize, exps: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if axis + 1 == exps.len() {
        exps[axis] = remaining;
        out.push(MultiIndex::new(exps).unwrap());
        return;
    }
    for e in (0..=remaining).rev() {
        exps[axis] = e;
        compositions(remaining - e, axis + 1, exps, out);
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then_with(|| self.order().cmp(&other.order()))
            .then_with(|| other.exponents().cmp(self.exponents()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.exponents().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MultiIndex {
    type Err = MultiIndexError;

    /// Parses the textual form `[a1,a2,...,an]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| MultiIndexError::Malformed(s.to_string()))?;
        let exps = inner
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| MultiIndexError::Malformed(s.to_string()))?;
        MultiIndex::new(&exps)
    }
}

/// A tuple `Θ = (θ¹,…,θʳ)` of multi-indices of a common dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MultiIndexTuple {
    entries: Vec<MultiIndex>,
}

impl MultiIndexTuple {
    pub fn new(entries: Vec<MultiIndex>) -> Result<Self, MultiIndexError> {
        let first = entries.first().ok_or(MultiIndexError::EmptyTuple)?;
        for e in &entries[1..] {
            first.check_dim(e)?;
        }
        Ok(MultiIndexTuple { entries })
    }

    pub fn entries(&self) -> &[MultiIndex] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Γ ≺ Θ`: entrywise `≤` with strict inequality in at least one entry.
    pub fn prec(&self, other: &Self) -> Result<bool, MultiIndexError> {
        if self.len() != other.len() {
            return Err(MultiIndexError::TupleLengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let mut strict = false;
        for (g, t) in self.entries.iter().zip(&other.entries) {
            if !g.leq(t)? {
                return Ok(false);
            }
            strict |= g != t;
        }
        Ok(strict)
    }
}

impl fmt::Display for MultiIndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
