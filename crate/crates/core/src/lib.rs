//! Exact and spectral verification of compensated-compactness quantities.
//!
//! The crate is layered bottom-up:
//!
//! * [`multiindex`] — multi-index arithmetic and combinatorics;
//! * [`diffpoly`] — exact differential polynomials with total derivatives,
//!   the Euler operator, substitution and integration-by-parts rebalancing;
//! * [`opdsl`] — a small operator language, its parser, printer and
//!   coefficient tables;
//! * [`criteria`] — zero-integral, H¹-regularity and null-Lagrangian
//!   decisions with witnesses;
//! * [`spectral`] — a periodic-grid backend (Fourier multipliers, Beurling
//!   transform, potentials, H¹/BMO estimators, quadrature oracle and
//!   experiments);
//! * [`corpus`] — the bundled operator corpus.

pub mod corpus;
pub mod criteria;
pub mod diffpoly;
pub mod multiindex;
pub mod opdsl;
pub mod spectral;

pub use diffpoly::{DiffPolynomial, JetVar, Monomial, Rational, Symbol};
pub use multiindex::{MultiIndex, MultiIndexTuple};
pub use opdsl::{parse, parse_file, OperatorSpec};
