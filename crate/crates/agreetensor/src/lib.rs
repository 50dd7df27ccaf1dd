//! Exact models of three-rater agreement data on an n x n x n probability
//! tensor: six parametric families, their polynomial invariants, pairwise
//! kappa statistics with closed forms and sweeps, geometric relations
//! between the models, and fitting to observed counts.
//!
//! Arithmetic is generic over [`scalar::Scalar`]; the rational backend
//! ([`scalar::Rat`]) makes invariant vanishing and kappa identities exact,
//! while the f64 backend serves fitting and I/O.

pub mod agreement;
pub mod error;
pub mod estimation;
pub mod geometry;
pub mod invariants;
pub mod models;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use estimation::{em_fit, ipf_fit, loglik, CountTensor, FitResult};
pub use geometry::{
    boundary_counterexample, hadamard, mix_to_qi, variety_membership, BoundaryDirection,
    LinearVarietyId, WitnessReport,
};
pub use models::{Family, ModelParams};
pub use scalar::{Rat, Scalar};
pub use tensor::{ProbabilityTensor, Tensor};
