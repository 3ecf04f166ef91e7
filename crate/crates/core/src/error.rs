use alloc::string::String;

use crate::field::FieldDescriptor;

/// Errors raised by the exact algebra layer.
///
/// Mathematical failures that are the *content* of a check (a failing Jacobi
/// triple, an unsolvable p-map system) are reported as values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^32")]
    InvalidPrime(u64),
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldDescriptor, right: FieldDescriptor },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("duplicate abscissa at point {0}")]
    DuplicateAbscissa(usize),
    #[error("invalid family parameters: {0}")]
    InvalidParameters(String),
    #[error("index {index} out of range for basis of size {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket [{left}, {right}] given in both orientations with inconsistent values")]
    OrientationConflict { left: String, right: String },
    #[error("bracket [{0}, {0}] of an even vector must vanish")]
    NonzeroEvenSquare(String),
    #[error("duplicate basis name {0}")]
    DuplicateName(String),
    #[error("subset is not closed under the bracket: [{left}, {right}] leaves it")]
    NotClosed { left: String, right: String },
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("ad({generator}) is not diagonal on basis vector {basis}")]
    NonDiagonalTorus { generator: String, basis: String },
    #[error("torus is not abelian: [{left}, {right}] != 0")]
    TorusNotAbelian { left: String, right: String },
    #[error("torus element {0} is not even")]
    OddTorusElement(String),
    #[error("weight of {0} is not an integer")]
    NonIntegralWeight(String),
    #[error("grading is not additive on [{left}, {right}]")]
    NonAdditiveGrading { left: String, right: String },
    #[error("differential does not preserve weight: row {row}, column {col}")]
    NonHomogeneousDifferential { row: usize, col: usize },
    #[error("module does not match algebra: {0}")]
    ModuleMismatch(String),
    #[error("cochain degree {found} does not match expected degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("operation requires q = 2, got {0}")]
    UnsupportedDegree(usize),
    #[error("operation requires a prime field of odd characteristic, got {0}")]
    WrongField(FieldDescriptor),
    #[error("element is not even")]
    NotEven,
    #[error("element is not odd")]
    NotOdd,
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
}
