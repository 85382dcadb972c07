use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by the command-line front end to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A mathematical hypothesis of a construction or operation is violated.
    Hypothesis,
    /// An enumeration or sampling budget would be exceeded.
    Budget,
    /// Reading or writing a file failed, or a document could not be parsed.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("characteristic {0} exceeds the supported 61-bit range")]
    CharacteristicTooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{k} does not fit in 64-bit element encoding")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("modulus must be monic of degree {expected} over F_{p}")]
    ModulusShape { p: u64, expected: u32 },
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("value {value} is not an element of a field of order {q}")]
    NotAnElement { value: u64, q: u64 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("square test needs odd characteristic; every element of a field of characteristic 2 is a square")]
    CharacteristicTwo,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial degree {found} is below the required minimum {required}")]
    DegreeTooSmall { found: usize, required: usize },
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("points must be pairwise distinct")]
    RepeatedPoints,
    #[error("expected {expected} points, got {found}")]
    PointCount { expected: usize, found: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("malformed document: {0}")]
    Parse(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Budget(_) => ErrorKind::Budget,
            Error::Io(_) | Error::Parse(_) => ErrorKind::Io,
            _ => ErrorKind::Hypothesis,
        }
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }

    pub(crate) fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
