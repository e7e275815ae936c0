use thiserror::Error;

/// Every failure the library can report.
///
/// Variants map onto CLI exit codes through [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("no value assigned to variable `{0}`")]
    MissingVariable(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("malformed series: {0}")]
    MalformedSeries(String),
    #[error("convergence too slow: {0}")]
    TooSlow(String),
    #[error("degenerate index {0}: term is zero")]
    DegenerateIndex(i64),
    #[error("inadmissible parameters: {0}")]
    InadmissibleParameters(String),
    #[error("cannot compose: {0}")]
    Composition(String),
    #[error("remainder does not vanish: {0}")]
    NonVanishingRemainder(String),
    #[error("acceleration failed: {0}")]
    AccelerationFailure(String),
    #[error("malformed WZ pair: {0}")]
    MalformedPair(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("catalog: {0}")]
    Catalog(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    pub(crate) fn unknown(kind: &'static str, name: impl Into<String>) -> Self {
        Error::Unknown { kind, name: name.into() }
    }

    /// Exit status used by the command-line front end: 2 for bad input,
    /// 3 when the target precision is out of reach, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TooSlow(_) => 3,
            Error::Parse { .. }
            | Error::Unknown { .. }
            | Error::MissingVariable(_)
            | Error::Io(_)
            | Error::Catalog(_) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
