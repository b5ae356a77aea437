use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("truncation specs differ")]
    SpecMismatch,

    #[error("monomial {0} lies outside the truncation window")]
    OutOfWindow(String),

    #[error("series is not invertible: {0}")]
    NotInvertible(String),

    #[error("series has a nonzero constant term")]
    NonzeroConstant,

    #[error("result is only exact up to {have} but the window needs {need} ({form})")]
    InsufficientPrecision { form: String, have: i64, need: i64 },

    #[error("factor enumeration does not terminate: {0}")]
    NonTerminating(String),

    #[error("unknown identity {name:?}")]
    UnknownIdentity { name: String, suggestions: Vec<String> },

    #[error("identity {name:?} cannot run on this window: {reason}")]
    WindowMismatch { name: String, reason: String },

    #[error("malformed graph: {0}")]
    Graph(String),

    #[error("oracle refused: {0}")]
    OracleGuard(String),
}
