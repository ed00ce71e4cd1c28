use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class, used by the CLI to pick an exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or invalid user input.
    Input,
    /// A configured size limit was exceeded.
    Overflow,
    /// The data contradicts an invariant that must hold for valid input.
    Internal,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("origami is not connected: <r,u> is not transitive")]
    NotConnected,
    #[error("alternating form is not unimodular modulo its radical")]
    NonUnimodular,
    #[error("alternating form vanishes on the lattice")]
    DegenerateForm,
    #[error("matrix does not satisfy m^{n} = 1")]
    OrderMismatch { n: usize },
    #[error("coset enumeration exceeded {limit} cosets")]
    EnumerationOverflow { limit: usize },
    #[error("orbit exceeded {limit} elements")]
    OrbitOverflow { limit: usize },
    #[error("element is not a member of the subgroup")]
    NotAMember,
    #[error("element is not parabolic")]
    NotParabolic,
    #[error("matrix of the automorphism is not in the Veech group")]
    NotInVeechGroup,
    #[error("traced path does not return to the base square")]
    PathNotClosed,
    #[error("radical dimension {found}, expected {expected}")]
    RadicalDimensionMismatch { expected: usize, found: usize },
    #[error("subspace is not invariant under generator {0}")]
    NotInvariant(String),
    #[error("relator violated: {0}")]
    RelatorViolation(String),
    #[error("image translation length {m} is not divisible by cusp width {w}")]
    DivisibilityViolation { m: String, w: usize },
    #[error("parabolic element has hyperbolic image {0}")]
    HyperbolicImage(String),
    #[error("degree inconsistency across image cusps: {0:?}")]
    DegreeInconsistency(Vec<usize>),
    #[error("image cusp {0} is not hit by any cusp of the domain")]
    UncoveredImageCusp(usize),
    #[error("image is not a lattice (enumeration did not close within {limit} cosets)")]
    ThinOrUnbounded { limit: usize },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("invalid covering parameters: {0}")]
    InvalidParameters(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("inconsistent covering spec: {0}")]
    InconsistentSpec(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            DegreeMismatch(..)
            | InvalidPermutation(_)
            | Parse(_)
            | InvalidInput(_)
            | NotConnected
            | OutOfRange(_)
            | InvalidParameters(_)
            | NotAMember
            | NotParabolic
            | NotInVeechGroup => ErrorClass::Input,
            EnumerationOverflow { .. } | OrbitOverflow { .. } | ThinOrUnbounded { .. } => {
                ErrorClass::Overflow
            }
            _ => ErrorClass::Internal,
        }
    }
}
