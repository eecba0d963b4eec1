//! Discrete generalized conformal Laplacian on flat periodic grids.
//!
//! The base metric is the flat torus; curvature enters only through the
//! potential `V` of `L = -c_n Δ_h + V`. Conformal changes act through
//! `v ↦ u^{-α} L(u v)`, so the deformed operator is never re-discretized.

mod conformal;
mod eigen;
mod forms;
mod grid;
mod operator;
mod prescribe;

use thiserror::Error;

pub use conformal::{conformal_scalar, convex_path_check, ConformalChange, PathReport};
pub use eigen::{
    classify, lowest_eigenpair, principal_eigenpair, sign_invariance_check, to_dense, EigenOptions, EigenPair, Sign,
    Trichotomy, TrichotomyClass, WeightedOperator,
};
pub use forms::{codifferential, exterior_derivative, face_directions, harmonic_pythagoras, EdgeForm, FaceForm, PythagorasReport};
pub use grid::{Grid, GridFunction, GridFunctionFile, MAX_POINTS};
pub use operator::{conformal_exponent, conjugate_gradient, coupling, DiscreteOperator, Shifted, SolveStats, SymmetricOperator};
pub use prescribe::{
    epsilon_threshold, integral_criterion, prescribe_curvature, rearrangement_bound, rearrangement_certifies,
    IntegralCriterion, PrescribeOptions, PrescribeReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid functions live on different grids")]
    GridMismatch,
    #[error("non-finite grid values")]
    NonFinite,
    #[error("{0} must be strictly positive")]
    NotPositive(&'static str),
    #[error("{0} is not strictly positive")]
    EndpointNotPositive(&'static str),
    #[error("operator is not positive definite")]
    NotPositiveDefinite,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("target curvature must be strictly negative everywhere")]
    KappaNotNegative,
    #[error(
        "mu1 = {mu1} is not negative: a positive solution with negative curvature exists only in the negative class"
    )]
    NonNegativeEigenvalue { mu1: f64 },
    #[error("2-form must have constant coefficients")]
    NotConstant,
}
