use thiserror::Error;

use crate::lattice::PicClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick a status and exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Domain,
    Inconsistency,
    Data,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("{what} = {value} is outside the supported range")]
    OutOfRange { what: &'static str, value: i64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("order exceeds gap range: 2d-1 = {order} is not < 2g = {twice_genus}")]
    OrderExceedsGapRange { order: i64, twice_genus: i64 },

    #[error("parity violation: {0}")]
    Parity(String),

    #[error("type must be in N^4, got {0:?}")]
    NegativeType([i64; 4]),

    #[error("type not realizable by the degree relation: {0}")]
    NotRealizable(String),

    #[error("unsupported closed form: {0}")]
    UnsupportedForm(String),

    #[error("construction inconsistency in {check}: {detail}")]
    Inconsistency { check: String, detail: String },

    #[error("construction inconsistency in {check}: {left:?} is not equivalent to {right:?}")]
    ClassMismatch {
        check: String,
        left: Box<PicClass>,
        right: Box<PicClass>,
    },

    #[error("certificate data error: {0}")]
    CertificateData(String),

    #[error("i/o error: {0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Overflow(_)
            | Error::OutOfRange { .. }
            | Error::InvalidArgument(_)
            | Error::OrderExceedsGapRange { .. }
            | Error::Parity(_)
            | Error::NegativeType(_)
            | Error::NotRealizable(_)
            | Error::UnsupportedForm(_) => ErrorKind::Domain,
            Error::Inconsistency { .. } | Error::ClassMismatch { .. } => ErrorKind::Inconsistency,
            Error::CertificateData(_) | Error::Io(_) => ErrorKind::Data,
            Error::Internal(_) => ErrorKind::Internal,
        }
    }

    pub(crate) fn inconsistency(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Inconsistency {
            check: check.into(),
            detail: detail.into(),
        }
    }
}

/// Largest magnitude accepted for any scalar or vector entry handed to the engine.
///
/// Squares of four such entries still fit in an `i64`, so the quadratic
/// relations never need wider arithmetic.
pub const MAX_ENTRY: i64 = 1 << 30;

pub(crate) fn check_range(what: &'static str, value: i64) -> Result<i64> {
    if value.abs() > MAX_ENTRY {
        Err(Error::OutOfRange { what, value })
    } else {
        Ok(value)
    }
}
