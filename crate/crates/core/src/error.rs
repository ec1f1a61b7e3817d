use thiserror::Error;

use crate::complex::Simplex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("simplex {0} is not in the complex")]
    SimplexNotInComplex(Simplex),

    #[error("simplex list is not face-closed: {simplex} is missing its face {missing}")]
    NotFaceClosed { simplex: Simplex, missing: Simplex },

    #[error("simplex {0} is empty or repeats a vertex")]
    MalformedSimplex(String),

    #[error("objects live on different complexes")]
    ComplexMismatch,

    #[error("simplex set is not open: {simplex} lies in the set but its coface {coface} does not")]
    NotOpen { simplex: Simplex, coface: Simplex },

    #[error("value assigned to {0}, which lies outside the open set")]
    OutsideOpenSet(Simplex),

    #[error("support is not relatively compact: face {face} of {simplex} lies outside the open set")]
    SupportNotRelativelyCompact { simplex: Simplex, face: Simplex },

    #[error("vertex order is not injective: vertices {0} and {1} share a weight")]
    NonInjectiveOrder(i64, i64),

    #[error("vertex {0} has no weight")]
    MissingWeight(i64),

    #[error("vertex {0} has no coordinates")]
    MissingCoordinates(i64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vertices of {0} are affinely dependent")]
    AffinelyDependent(Simplex),

    #[error("link of {simplex} has {size} vertices, more than the supported {limit}")]
    LinkTooLarge {
        simplex: Simplex,
        size: usize,
        limit: usize,
    },

    #[error("no chamber {signs} at simplex {simplex}")]
    UnknownChamber { simplex: Simplex, signs: String },

    #[error("table is not a Lagrangian cycle: at {simplex} chamber {first} gives {first_value} but chamber {second} gives {second_value}")]
    InconsistentTable {
        simplex: Simplex,
        first: String,
        second: String,
        first_value: String,
        second_value: String,
    },

    #[error("covector is not generic: vertices {0} and {1} have equal height")]
    NonGenericCovector(i64, i64),

    #[error("permutation is not a bijection of the vertex set: {0}")]
    NotAPermutation(String),

    #[error("permutation does not act simplicially: image of {simplex} is {image}, not a simplex")]
    NotSimplicial { simplex: Simplex, image: String },

    #[error("group generated by the action exceeds {0} elements")]
    GroupTooLarge(usize),

    #[error("action is not regular: {0}")]
    IrregularAction(String),

    #[error("action still irregular after {0} barycentric subdivisions")]
    StillIrregular(usize),

    #[error("matrix for group element {0} is not orthogonal")]
    NonOrthogonalMatrix(usize),

    #[error("matrices are incompatible with the action: {0}")]
    IncompatibleAction(String),

    #[error("open sets do not cover the complex: {0} is in neither")]
    NotACover(Simplex),

    #[error("splitting did not finish within {0} subdivisions")]
    SubdivisionCapExceeded(usize),

    #[error("{context}: {message}")]
    Parse { context: String, message: String },

    #[error("{object}: {reason}")]
    Invalid { object: String, reason: String },
}
