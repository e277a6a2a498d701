use thiserror::Error;

use crate::galois::Violation;

/// Every failure the library can report.
///
/// Variants map one-to-one onto the named failure modes of each pipeline
/// stage; [`Error::exit_code`] gives each a distinct process exit status.
#[derive(Debug, Error)]
pub enum Error {
    #[error("generator {index} is not a permutation of 0..{degree}")]
    NotAPermutation { index: usize, degree: usize },
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("permutation degree must be at least 1")]
    EmptyDegree,
    #[error("group order exceeds the cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("class-sum eigenvectors did not split into {expected} simple eigenspaces after {attempts} attempts")]
    SplitFailure { expected: usize, attempts: usize },
    #[error("{what} = {value} is not within 1e-6 of an integer")]
    NotAnInteger { what: &'static str, value: f64 },
    #[error("isotypic component of character {chi} has dimension {found}, expected {expected}")]
    BadIsotypicDim {
        chi: usize,
        expected: usize,
        found: usize,
    },
    #[error("commutant splitting of character {chi} found no eigenspace of dimension {degree} after {attempts} attempts")]
    SplitDegenerate {
        chi: usize,
        degree: usize,
        attempts: usize,
    },
    #[error("irrep {chi} failed certification: {reason}")]
    IrreducibilityCheckFailed { chi: usize, reason: String },
    #[error("intertwiner space has dimension {found} but character theory predicts {expected}")]
    DimensionMismatchWithCharacterCount { expected: usize, found: usize },
    #[error("subspace components add up to {components}, but the subspace has dimension {dim}")]
    NotBlockDecomposable { dim: usize, components: usize },
    #[error("subspace does not contain the trivial block")]
    MissingTrivial,
    #[error("S fails right-ideal certification: {reason}")]
    RightIdealCheckFailed { reason: String },
    #[error("coordinate-equality partition has {blocks} blocks but dim S = {dim}")]
    NotAnIdempotentSpan { blocks: usize, dim: usize },
    #[error("subspace is not closed under G-homomorphisms M⊗M → M: {0}")]
    NotClosed(Box<Violation>),
    #[error("identity block is not a subgroup: {reason}")]
    SubgroupAxiomFailed { reason: String },
    #[error("block {block} is not the coset G1·g of its least member")]
    CosetCheckFailed { block: usize },
    #[error("fixed space of the recovered subgroup differs from the input subspace")]
    FixedSpaceMismatch,
}

impl Error {
    /// Distinct nonzero exit status per variant, starting at 10.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotAPermutation { .. } => 10,
            Error::DegreeMismatch { .. } => 11,
            Error::EmptyDegree => 12,
            Error::OrderCapExceeded { .. } => 13,
            Error::DimensionMismatch { .. } => 14,
            Error::NotHermitian { .. } => 15,
            Error::SplitFailure { .. } => 16,
            Error::NotAnInteger { .. } => 17,
            Error::BadIsotypicDim { .. } => 18,
            Error::SplitDegenerate { .. } => 19,
            Error::IrreducibilityCheckFailed { .. } => 20,
            Error::DimensionMismatchWithCharacterCount { .. } => 21,
            Error::NotBlockDecomposable { .. } => 22,
            Error::MissingTrivial => 23,
            Error::RightIdealCheckFailed { .. } => 24,
            Error::NotAnIdempotentSpan { .. } => 25,
            Error::NotClosed(_) => 26,
            Error::SubgroupAxiomFailed { .. } => 27,
            Error::CosetCheckFailed { .. } => 28,
            Error::FixedSpaceMismatch => 29,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
