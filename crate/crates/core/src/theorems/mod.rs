//! Executable verifiers for the dominated-contraction theorems and the
//! generalized zero-two law.
//!
//! Every verifier validates its hypotheses exactly before it looks at the
//! conclusion, and reports an unmet hypothesis separately from a failed
//! conclusion. Conclusions quantified over all `n` are checked over a finite
//! range; the report states whether that range is only a prefix or whether a
//! monotonicity argument extends it to the whole tail.

mod decomposition;
mod dominance;
mod hypotheses;
mod zero_two;

pub use decomposition::{averaging_defect, build_decomposition, AveragingDefect, DecompositionWitness, DefectEntry};
pub use dominance::{check_corollary_2_2, check_theorem_2_1, check_theorem_2_3, check_theorem_2_3_capped, DEFAULT_GRID_CAP};
pub use hypotheses::{BundleError, CommutingFamily, DominatedPair};
pub use zero_two::{
    check_lemma_3_2, find_epsilon_certificate, zero_two_trace, Certificate, CertificateSearch,
    Lemma32Report, SearchCaps, ZeroTwoTrace,
};

use thiserror::Error;

use crate::report::HypothesisCheck;
use crate::LatticeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("empty range: upper bound {upper} is below the start {start}")]
    EmptyRange { start: u64, upper: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("grid of {points} points exceeds the cap of {cap}")]
    GridTooLarge { points: u128, cap: u128 },
    #[error("preconditions fail: {}", .0.iter().filter(|h| !h.holds).map(|h| h.name.as_str()).collect::<Vec<_>>().join("; "))]
    Precondition(Vec<HypothesisCheck>),
    /// An exact identity that holds by construction did not; always a bug.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}
