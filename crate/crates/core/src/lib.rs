//! Finite-group machinery for the subgroup ↔ fixed-subspace correspondence
//! on the multiplicity-one module `M = ⊕_χ M_χ`.
//!
//! The pipeline runs bottom-up:
//!
//! * [`group`]: permutation groups, conjugacy classes, subgroups, cosets.
//! * [`linalg`]: tolerance-certified subspaces and Hermitian eigensplitting.
//! * [`chars`]: character tables and central idempotents.
//! * [`rep`]: unitary irreducibles, the module `M`, fixed subspaces `M^H`.
//! * [`homs`]: a basis of all G-homomorphisms `M⊗M → M`.
//! * [`galois`]: closure testing and subgroup recovery with a certificate.
//! * [`verify`]: the exhaustive round-trip check over all subgroups.

pub mod chars;
pub mod error;
pub mod galois;
pub mod group;
pub mod homs;
pub mod linalg;
pub mod rep;
pub mod suite;
pub mod verify;

pub use chars::{central_idempotents, character_table, CentralIdempotent, CharacterTable};
pub use error::{Error, Result};
pub use galois::{
    check_closure, closure, decompose_R, embed_S, hadamard, partition_from_S, recover_subgroup, GaloisContext,
    RSubspace, RecoveryCertificate, SSpace, Violation,
};
pub use group::{
    conjugacy_classes, enumerate_subgroups, left_cosets, right_cosets, ConjClasses, Group, GroupFile, Perm, Subgroup,
};
pub use homs::{cg_multiplicity, hom_basis, Intertwiner, IntertwinerBasis};
pub use linalg::{hermitian_eigensplit, CMatrix, CVector, RngSeed, Subspace, C64, DEFAULT_TOL};
pub use rep::{build_M, fixed_dim_by_character, fixed_subspace, Irrep, ModuleM};
pub use verify::{verify_galois, VerificationReport};
