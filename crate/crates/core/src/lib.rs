//! Exact cohomology of finite-dimensional Lie superalgebras.
//!
//! The crate builds Lie superalgebras from structure constants (including the
//! solvable families with model filiform and model nilpotent nilradical),
//! assembles the Chevalley–Eilenberg cochain complex with coefficients in an
//! arbitrary module, and computes cocycle, coboundary and cohomology
//! dimensions over ℚ or 𝔽_p with sparse exact elimination. Over 𝔽_p it also
//! decides the existence of a `[p|2p]` restricted structure.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod algebra;
pub mod cochain;
pub mod cohomology;
pub mod error;
pub mod families;
pub mod field;
pub mod linalg;
pub mod module;
pub mod restricted;
pub mod structure;

pub use algebra::{BasisVector, Family, Parity, SuperAlgebra, SuperAlgebraBuilder, ValidationReport};
pub use error::Error;
pub use field::{Field, FieldDescriptor, PrimeField, Rationals, Scalar};
pub use linalg::{SparseMatrix, SparseVector};
pub use module::GModule;
pub use structure::{CharacteristicSequence, WeightGrading};
