use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. Each variant carries a stable code, see [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("two distinct members share the lexicographically minimal tuple")]
    Tie,
    #[error("fans live in different ambient dimensions")]
    IncompatibleFans,
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error("negative scalar {0}")]
    NegativeScalar(i64),
    #[error("cone is not a maximal cone of the PL fan")]
    NotACone,
    #[error("no dual pair registered on this lattice")]
    NoDualRegistered,
    #[error("chart image `{0}` is unbounded")]
    NotCompact(String),
    #[error("origin is not interior to the polytope")]
    OriginNotInterior,
    #[error("polytope has a non-integral vertex")]
    NotIntegral,
    #[error("verification failed: {0}")]
    VerificationFailure(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("not a point: {0}")]
    NotAPoint(String),
    #[error("algebra elements have different parameters")]
    ParamMismatch,
    #[error("bad basis: {0}")]
    BadBasis(String),
    #[error("objects belong to different lattices")]
    LatticeMismatch,
    #[error("invalid lattice data: {0}")]
    InvalidLattice(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Unbounded => "E_UNBOUNDED",
            Error::DimensionMismatch { .. } => "E_DIMENSION_MISMATCH",
            Error::Tie => "E_TIE",
            Error::IncompatibleFans => "E_INCOMPATIBLE_FANS",
            Error::UnknownChart(_) => "E_UNKNOWN_CHART",
            Error::NegativeScalar(_) => "E_NEGATIVE_SCALAR",
            Error::NotACone => "E_NOT_A_CONE",
            Error::NoDualRegistered => "E_NO_DUAL_REGISTERED",
            Error::NotCompact(_) => "E_NOT_COMPACT",
            Error::OriginNotInterior => "E_ORIGIN_NOT_INTERIOR",
            Error::NotIntegral => "E_NOT_INTEGRAL",
            Error::VerificationFailure(_) => "E_VERIFICATION_FAILURE",
            Error::BadParams(_) => "E_BAD_PARAMS",
            Error::NotAPoint(_) => "E_NOT_A_POINT",
            Error::ParamMismatch => "E_PARAM_MISMATCH",
            Error::BadBasis(_) => "E_BAD_BASIS",
            Error::LatticeMismatch => "E_LATTICE_MISMATCH",
            Error::InvalidLattice(_) => "E_INVALID_LATTICE",
        }
    }
}
