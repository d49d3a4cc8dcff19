use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptySet,
    #[error("conductor is not among the small elements")]
    ConductorMissing,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("bad index set: {0}")]
    BadIndexSet(String),
    #[error("not a good semigroup: {0}")]
    NotGood(String),
    #[error("omega is not an element of the semigroup")]
    OmegaNotInS,
    #[error("omega must have all coordinates positive")]
    OmegaNotPositive,
    #[error("point is not in the semigroup")]
    NotInSemigroup,
    #[error("level {level} element {point} does not dominate {shift}")]
    NegativeCoordinate { level: usize, point: String, shift: String },
    #[error("semigroup is not local")]
    NotLocal,
    #[error("blow-up chain exceeded depth bound {0}")]
    NonTermination(usize),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("invalid multiplicity sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid H-type: {0}")]
    InvalidHType(String),
    #[error("not the semigroup of a plane branch: {0}")]
    NotPlane(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("x is not transversal (order of y below order of x)")]
    NotTransversal,
    #[error("branches coincide up to the available precision")]
    IdenticalBranches,
    #[error("{0} is not a partial Noether sum")]
    NoSuchK(u64),
    #[error("splitting number {k} is not admissible for branches {i},{j}")]
    NotAdmissible { i: usize, j: usize, k: i64 },
    #[error("splitting matrix violates compatibility at ({0},{1},{2})")]
    NotCompatible(usize, usize, usize),
    #[error("component {0} vanishes to the available precision")]
    ZeroComponent(usize),
    #[error("no conductor found below bound {0}")]
    BoundTooSmall(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySet => "EmptySet",
            Error::ConductorMissing => "ConductorMissing",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::BadIndexSet(_) => "BadIndexSet",
            Error::NotGood(_) => "NotGood",
            Error::OmegaNotInS => "OmegaNotInS",
            Error::OmegaNotPositive => "OmegaNotPositive",
            Error::NotInSemigroup => "NotInSemigroup",
            Error::NegativeCoordinate { .. } => "NegativeCoordinate",
            Error::NotLocal => "NotLocal",
            Error::NonTermination(_) => "NonTermination",
            Error::InvalidTree(_) => "InvalidTree",
            Error::MalformedTree(_) => "MalformedTree",
            Error::InvalidSequence(_) => "InvalidSequence",
            Error::InvalidHType(_) => "InvalidHType",
            Error::NotPlane(_) => "NotPlane",
            Error::InsufficientPrecision(_) => "InsufficientPrecision",
            Error::NotTransversal => "NotTransversal",
            Error::IdenticalBranches => "IdenticalBranches",
            Error::NoSuchK(_) => "NoSuchK",
            Error::NotAdmissible { .. } => "NotAdmissible",
            Error::NotCompatible(..) => "NotCompatible",
            Error::ZeroComponent(_) => "ZeroComponent",
            Error::BoundTooSmall(_) => "BoundTooSmall",
            Error::Parse(_) => "Parse",
        }
    }
}
