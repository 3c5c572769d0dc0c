use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported characteristic: {0}")]
    UnsupportedCharacteristic(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Requested a structure outside the range where the dichotomy applies (e <= nu).
    #[error("e = {e} is not above nu = {nu}; the extension has degree at most 2")]
    OutOfScope { e: u32, nu: u32 },

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("no primitive 2^{e}-th root of unity in F_{p}^{n}")]
    NoRootOfUnity { p: u64, n: usize, e: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
