//! Exact decisions: zero integral, H¹ regularity, null Lagrangian.
//!
//! The zero-integral property is decided by the Euler operator: an operator
//! integrates to zero against all compactly supported inputs exactly when
//! every Euler residual of its (potential-substituted) body vanishes. The
//! coefficient criteria are faster, shape-specific tests that must agree
//! with it; the agreement is checked in the test-suite rather than assumed.

mod coefficient;
mod decompose;
mod h1;
pub mod linalg;
mod parity;
mod potentials;
pub mod random;
mod report;
mod witness;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::diffpoly::{DiffPolyError, DiffPolynomial, Rational, Symbol};
use crate::opdsl::{OperatorSpec, TableError};

pub use coefficient::{bilinear_criterion, binomial_product_condition, homogeneous_criterion, leibniz_multilinear_criterion};
pub use decompose::{scaling_decompose, step_decompose, StepDecomposition};
pub use h1::{h1_verdict, null_lagrangian, zero_integral, H1Verdict, Theorem};
pub use parity::{detect_parity_shape, parity_body, parity_classify, parity_spec, ParityShape, ScalarOperator};
pub use potentials::{
    curl_potential_component, div_potential_component, divergence_of_div_potential, pair_component, potential_substitute,
    PotentialMap,
};
pub use report::{analyze, AnalysisReport, ClaimCheck, NumericSummary};
pub use witness::Witness;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriteriaError {
    #[error("criterion needs {expected}, got {found}")]
    WrongShape { expected: String, found: String },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Poly(#[from] DiffPolyError),
    #[error("shape not detected: {0}")]
    ShapeNotDetected(String),
}

/// Which procedure produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    EulerOracle,
    CoefficientCriterion,
    HomogeneousCriterion,
    BinomialProductCondition,
    LeibnizMultilinear,
    #[serde(rename = "potential_substitution+euler")]
    PotentialSubstitutionEuler,
    ParityRule,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit enum serializes");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub value: bool,
    pub method: Method,
    pub witness: Option<Witness>,
    /// Nonzero criterion sums (or residuals), keyed by a readable label.
    pub details: BTreeMap<String, Rational>,
}

impl Verdict {
    fn holds(method: Method) -> Self {
        Verdict {
            value: true,
            method,
            witness: None,
            details: BTreeMap::new(),
        }
    }
}

/// First nonzero Euler residual of `body`, if any.
pub(crate) fn first_nonzero_residual(
    body: &DiffPolynomial,
) -> Result<Option<((Symbol, usize), DiffPolynomial)>, DiffPolyError> {
    Ok(body.euler_residuals()?.into_iter().find(|(_, r)| !r.is_zero()))
}

/// Sign `(−1)^k` as a rational.
pub(crate) fn parity_sign(k: u32) -> Rational {
    if k.is_multiple_of(2) {
        crate::diffpoly::int(1)
    } else {
        crate::diffpoly::int(-1)
    }
}

/// Builds a false verdict carrying a witness from `body`'s Euler residuals.
pub(crate) fn refuted(
    body: &DiffPolynomial,
    method: Method,
    details: BTreeMap<String, Rational>,
) -> Result<Verdict, CriteriaError> {
    let witness = first_nonzero_residual(body)?.map(|((s, i), r)| Witness::from_residual(s, i, r));
    Ok(Verdict {
        value: false,
        method,
        witness,
        details,
    })
}

pub(crate) fn spec_body_for_euler(spec: &OperatorSpec) -> Result<(DiffPolynomial, Method), CriteriaError> {
    if spec.is_constrained() {
        Ok((potential_substitute(spec)?.0.body, Method::PotentialSubstitutionEuler))
    } else {
        Ok((spec.body.clone(), Method::EulerOracle))
    }
}
