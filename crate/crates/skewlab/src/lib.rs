//! Exact computational algebra for crossed products and twisted polynomial rings.
//!
//! Everything is computed over exact coefficient fields (arbitrary-precision
//! rationals or prime fields F_p) with structure-constant representations of
//! finite-dimensional algebras. The main pipeline:
//!
//! * [`scalars`] — exact scalar arithmetic and dense exact linear algebra,
//! * [`fgalg`] — finite-dimensional associative algebras given by structure
//!   constants (centers, centralizers, inverses, inner automorphisms),
//! * [`fieldext`] — field extensions with verified automorphism lists,
//! * [`groups`] — small finite groups by Cayley table and their composition
//!   series with prime cyclic quotients,
//! * [`skewpoly`] — twisted polynomial rings S[t;σ], right division, invariant
//!   polynomials, quotient algebras and generalized cyclic algebras,
//! * [`crossed`] — factor sets, crossed products (M,G,𝔞) and their chain
//!   decomposition along a solvable series,
//! * [`abelianchain`] — the forward construction of a crossed product
//!   containing a given abelian Galois extension,
//! * [`descriptor`] — JSON descriptors and artifacts for the CLI.
//!
//! All values are immutable after construction and all operations are pure
//! functions; sharing across threads is safe.

pub mod abelianchain;
pub mod crossed;
pub mod descriptor;
pub mod fgalg;
pub mod fieldext;
pub mod groups;
pub mod scalars;
pub mod skewpoly;

/// Library-wide error type. Verification failures carry the name of the
/// identity that failed so reports can cite it.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or out-of-contract input (bad dimensions, non-prime modulus,
    /// zero where nonzero required, unknown names, ...).
    #[error("input error: {0}")]
    InvalidInput(String),
    /// Scalars or elements from different coefficient domains were mixed.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    /// An element was used with an algebra it does not belong to.
    #[error("parent mismatch: {0}")]
    ParentMismatch(String),
    /// An operation that requires an associative algebra was called on a
    /// non-associative one.
    #[error("contract error: {0}")]
    NotAssociative(String),
    /// A twisted polynomial that must be invariant is not.
    #[error("not invariant: {0}")]
    NotInvariant(String),
    /// An element that must be invertible is not.
    #[error("not invertible: {0}")]
    NotInvertible(String),
    /// A named verification identity failed.
    #[error("verification failed: {0}")]
    ValidationFailed(String),
    /// The request is outside what the artifact supports (e.g. exhaustive
    /// search over the rationals).
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Consistency failure that should be impossible for valid inputs.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;




pub use fgalg::{AlgElement, AlgMorphism, StructureAlgebra};
pub use fieldext::FieldExtension;
pub use groups::{FiniteGroup, SolvableSeries};
pub use scalars::{Domain, Matrix, Scalar};
