use serde_json::{json, Value};
use thiserror::Error;

use crate::klyachko::KlyachkoError;
use crate::linear::LinearError;
use crate::picard::PicardError;
use crate::semiring::SemiringError;
use crate::toric::ToricError;

/// Any error raised by the library, with a stable code and a JSON witness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Klyachko(#[from] KlyachkoError),
    #[error(transparent)]
    Picard(#[from] PicardError),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Semiring(e) => match e {
                SemiringError::DivisionRequested => "DivisionRequested",
                SemiringError::WrongSemiring { .. } => "WrongSemiring",
                SemiringError::NotSemifield(_) => "NotSemifield",
                SemiringError::NotAUnit(_) => "NotAUnit",
                SemiringError::BadSplit { .. } => "BadSplit",
                SemiringError::Parse(_) => "ParseError",
            },
            Error::Linear(e) => match e {
                LinearError::DimensionMismatch { .. } => "DimensionMismatch",
                LinearError::NotInvertible(_) => "NotInvertible",
                LinearError::WrongTag => "WrongTag",
                LinearError::TooLarge(_) => "TooLarge",
                LinearError::SizeMismatch(..) => "SizeMismatch",
                LinearError::NotAPermutation(_) => "NotAPermutation",
                LinearError::NotASelection => "NotASelection",
            },
            Error::Toric(e) => e.code(),
            Error::Klyachko(e) => e.code(),
            Error::Picard(e) => e.code(),
        }
    }

    pub fn witness(&self) -> Value {
        match self {
            Error::Semiring(e) => match e {
                SemiringError::WrongSemiring { expected, found } => json!({ "expected": expected, "found": found }),
                SemiringError::NotSemifield(tag) => json!({ "semiring": tag }),
                SemiringError::NotAUnit(s) | SemiringError::Parse(s) => json!({ "value": s }),
                SemiringError::BadSplit { len, left, right } => json!({ "len": len, "left": left, "right": right }),
                SemiringError::DivisionRequested => Value::Null,
            },
            Error::Linear(e) => match e {
                LinearError::DimensionMismatch { left, right } => json!({ "left": left, "right": right }),
                LinearError::NotInvertible(w) => json!(w),
                LinearError::TooLarge(n) => json!({ "n": n }),
                LinearError::SizeMismatch(a, b) => json!({ "left": a, "right": b }),
                LinearError::NotAPermutation(p) => json!({ "images": p }),
                LinearError::WrongTag | LinearError::NotASelection => Value::Null,
            },
            Error::Toric(e) => e.witness(),
            Error::Klyachko(e) => e.witness(),
            Error::Picard(e) => e.witness(),
        }
    }

    /// `{"code", "message", "witness"}`.
    pub fn to_json(&self) -> Value {
        json!({ "code": self.code(), "message": self.to_string(), "witness": self.witness() })
    }
}
