use thiserror::Error;

/// Errors raised by the quantization library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input failed a precondition (non-skew matrix, bad group order, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// The logarithm is not unique for rotations by (almost) pi.
    #[error("rotation angle {angle} is within {tol:e} of pi; logarithm undefined")]
    BoundaryAngle { angle: f64, tol: f64 },

    /// Orbit closure did not terminate below the requested order.
    #[error("generators do not close into a group of order <= {max_order}")]
    NotFinite { max_order: usize },

    /// A point was not in the domain a locator expects.
    #[error("point lies outside the {0}")]
    OutOfDomain(&'static str),

    /// A cover set failed to contain a query point.
    #[error("cover gap: pulled-back rotation not covered by any of the {cover_len} shifted domains")]
    CoverGap { cover_len: usize },

    /// An alphabet letter that does not name an element.
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    /// Two decoders returned different words for the same input.
    #[error("decoder disagreement: {0}")]
    Disagreement(String),

    /// An error while processing one element of a sequence.
    #[error("sample {index}: {source}")]
    AtSample { index: usize, source: Box<Error> },

    #[error("I/O error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CoverGap { .. } | Error::Disagreement(_) => 3,
            Error::Io(_) | Error::Parse(_) => 4,
            Error::AtSample { source, .. } => source.exit_code(),
            _ => 2,
        }
    }

    pub(crate) fn at(index: usize) -> impl FnOnce(Error) -> Error {
        move |e| Error::AtSample {
            index,
            source: Box::new(e),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
