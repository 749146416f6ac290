//! Positive contractions on finite L¹(μ) spaces, in exact arithmetic.
//!
//! The crate models a finite measure space with rational weights, the L¹
//! vectors on it and the square matrices acting on them. On top of that
//! substrate it provides the operator lattice calculus (modulus, meet,
//! lattice homomorphisms), verifiers for the dominated-contraction theorems
//! and the generalized zero-two law, and generators for test inputs.
//!
//! Every verdict on the L¹ path is decided with arbitrary-precision
//! rationals; only [`lp`] uses floating point.

pub mod calculus;
pub mod gallery;
pub mod lp;
pub mod operator;
pub mod random;
pub mod rational;
pub mod report;
pub mod space;
pub mod theorems;

pub use calculus::{
    check_lemma_3_1, is_lattice_homomorphism, operator_meet, operator_modulus,
    LatticeHomCertificate, LatticeHomWitness, Lemma31Outcome,
};
pub use lp::{lp_operator_norm, LpNormError};
pub use operator::MatrixOperator;
pub use rational::{format_decimal, format_rational, parse_rational, Rational};
pub use report::{ConclusionLedger, Guarantee, HypothesisCheck, Report, Verdict};
pub use space::{L1Vector, MeasureSpace};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("a measure space needs at least one point")]
    EmptySpace,
    #[error("weight {index} is {weight}; weights must be strictly positive")]
    NonPositiveWeight { index: usize, weight: String },
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live on different measure spaces (dimensions {left} and {right})")]
    SpaceMismatch { left: usize, right: usize },
}
