//! Exact spin^c index arithmetic and a small numerical spectral-geometry lab.
//!
//! * [`gring`]: truncated graded rings over ℚ, the Â series.
//! * [`mancat`]: manifold models and their constructors.
//! * [`index`]: `α^c(M, L)`, index polynomials, vanishing searches.
//! * [`cliff`]: gamma matrices, Clifford action of 2-forms, generalized
//!   scalar curvature.
//! * [`spectral`]: discrete conformal Laplacians on periodic grids.

pub mod cliff;
pub mod gring;
pub mod index;
pub mod mancat;
pub mod spectral;

pub use cliff::{CliffordRep, TwistedCurvatureOperator, TwoForm};
pub use gring::{GradedClass, Rational, RingStructure};
pub use index::{Classification, IndexPolynomial, LineBundleClass};
pub use mancat::ManifoldModel;
pub use spectral::{DiscreteOperator, Grid, GridFunction, TrichotomyClass};
