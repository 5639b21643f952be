//! Weighted best polynomial approximation on [-1,1] built on Jacobi
//! polynomials: generalized translation operators, a generalized modulus of
//! smoothness, the Jacobi differential operator, Jackson-kernel smoothing
//! constructions, and an experiment harness that measures direct/inverse
//! approximation rates.

pub mod approx;
pub mod differential;
pub mod error;
pub mod harness;
pub mod ortho;
pub mod smoothness;
pub mod spaces;
pub mod translation;

/// Scalar type used throughout the concrete API.
pub type Real = f64;

pub use error::{Error, Result};
pub use ortho::{JacobiExpansion, JacobiParams, QuadratureRule};
pub use spaces::{Func, SpaceParams};
