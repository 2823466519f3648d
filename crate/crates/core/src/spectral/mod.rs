//! Periodic-grid numerics: spectral derivatives and singular integrals,
//! div/curl potentials, Hardy/BMO estimators, the quadrature oracle for
//! operator specs, and the scripted experiments.
//!
//! Everything lives on the torus `[−π, π)^n` as a surrogate for `ℝⁿ`: test
//! fields are supported well inside the box, so periodic quadrature and
//! convolution reproduce the whole-space quantities. Homogeneous
//! multipliers (Riesz, Beurling, inverse Laplacian) send the mean mode to 0.

pub mod beurling;
pub mod experiments;
pub mod export;
pub mod fields;
pub mod grid;
pub mod hardy;
pub mod jet2;
pub mod multipliers;
pub mod poincare;
pub mod potentials;
pub mod quadrature;

use thiserror::Error;

pub use beurling::{beurling, bmos_norm, hessian_det, jacobian, kb_apply, kb_identity_check, wirtinger};
pub use experiments::{run_experiment, ExperimentConfig, ExperimentResult, EXPERIMENTS};
pub use fields::{BumpSpec, Cutoff, TrigPolynomial};
pub use grid::{Grid, GridField};
pub use hardy::{bmo_norm_estimate, h1_norm_estimate, H1Estimate};
pub use multipliers::{divergence, gradient, leray_project, partial, riesz, spectral_derivative};
pub use poincare::{poincare_check, Cube, PoincareField, PoincareResult};
pub use potentials::{ns_identity_check, poisson_solve, potential_b, potential_c, potential_gradient};
pub use quadrature::{numeric_check, quadrature_integral, NumericOptions, Quadrature};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("dimension: {0}")]
    Dimension(String),
    #[error("resolution {0} is not a power of two of at least 8")]
    Resolution(usize),
    #[error("expected {expected} components, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("input is not mean-free (mean {0:e})")]
    NotMeanFree(f64),
    #[error("input is not divergence-free (relative divergence {0:e})")]
    NonSolenoidal(f64),
    #[error("no field supplied for `{0}`")]
    MissingField(String),
    #[error("the plateau region contains no grid points")]
    EmptyPlateau,
    #[error("support does not fit in the box: {0}")]
    Support(String),
    #[error("degenerate cube: {0}")]
    DegenerateCube(String),
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("{0}")]
    Criteria(#[from] crate::criteria::CriteriaError),
    #[error("{0}")]
    Poly(#[from] crate::diffpoly::DiffPolyError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
