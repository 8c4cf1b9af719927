use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Precision,
    Pole,
    Usage,
    Validation,
    Association,
    Consistency,
    Search,
    Transfer,
    Parse,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ErrorKind::Precision => "precision error",
            ErrorKind::Pole => "pole error",
            ErrorKind::Usage => "usage error",
            ErrorKind::Validation => "validation error",
            ErrorKind::Association => "association error",
            ErrorKind::Consistency => "consistency failure",
            ErrorKind::Search => "search error",
            ErrorKind::Transfer => "transfer failure",
            ErrorKind::Parse => "parse error",
        };
        f.write_str(s)
    }
}

/// Error raised by any computation, tagged with the module it came from.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("[{module}] {kind}: {message}")]
pub struct Error {
    pub kind: ErrorKind,
    pub module: &'static str,
    pub message: String,
}

impl Error {
    pub fn new(kind: ErrorKind, module: &'static str, message: impl Into<String>) -> Self {
        Error { kind, module, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $module:expr, $($arg:tt)*) => {
        return Err($crate::error::Error::new($crate::error::ErrorKind::$kind, $module, format!($($arg)*)))
    };
}
pub(crate) use bail;
