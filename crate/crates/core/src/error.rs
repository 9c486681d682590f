use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set size {0} out of range (1..=63)")]
    GroundSize(u32),

    #[error("ground set mismatch: expected m = {expected}, found m = {found}")]
    GroundMismatch { expected: u32, found: u32 },

    #[error("element {element} out of range for ground set of size {m}")]
    ElementOutOfRange { element: u32, m: u32 },

    #[error("element {0} already belongs to the set")]
    ElementPresent(u32),

    #[error("reference set Y must be nonempty")]
    EmptyReference,

    #[error("table has {found} entries, expected 2^{m} = {expected}")]
    TableLength { m: u32, expected: usize, found: usize },

    #[error("invalid rational {0:?}")]
    ParseRational(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("malformed function document: {0}")]
    Document(String),

    #[error("m = {m} exceeds the exhaustive search cap of {cap}")]
    ExhaustiveCap { m: u32, cap: u32 },

    #[error("f(empty set) = {0}, the Lovász extension requires f(empty set) = 0")]
    NonZeroAtEmpty(String),

    #[error("point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },

    #[error("coordinate {index} is not finite")]
    NonFinite { index: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("certificate is malformed: {0}")]
    MalformedCertificate(String),

    #[error("certificate does not verify against the function")]
    CertificateRejected,
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Document(err.to_string())
    }
}
