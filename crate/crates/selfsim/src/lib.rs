//! Exact construction and verification of self-similar Lie algebras.
//!
//! A self-similar structure on a Lie algebra `L` is a homomorphism
//! `ψ : L → (X ⊗ L) ⋉ Der X` into a wreath product over a truncated
//! polynomial alphabet `X`. The crate builds such structures from virtual
//! endomorphisms, checks the compatibility identities that make the
//! construction work, and analyzes the resulting actions on `X^{⊗m}`.
//!
//! The guide in `book/` walks through the layers with runnable examples.

pub mod catalog;
pub mod error;
pub mod field;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod truncalg;
pub mod structure;
pub mod wreath;

pub use error::{Error, Result};
pub use field::{factorial_inverse, FieldSpec, Scalar};
pub use linalg::{LinearOperator, SparseMatrix, SparseVec, Subspace};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/algebras.md")]
mod book_algebras {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/alphabets.md")]
mod book_alphabets {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/wreath.md")]
mod book_wreath {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/virtual-endomorphisms.md")]
mod book_virtual_endomorphisms {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/analyses.md")]
mod book_analyses {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/catalog.md")]
mod book_catalog {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
