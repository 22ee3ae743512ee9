use thiserror::Error;

use crate::cube::CubeParams;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cube parameters k={k}, n={n}: {reason}")]
    InvalidParams { k: u32, n: u32, reason: &'static str },

    #[error("point has {got} coordinates, expected {expected}")]
    WrongLength { expected: usize, got: usize },

    #[error("coordinate {value} at position {position} is outside 0..={max}")]
    CoordinateOutOfRange { position: usize, value: u32, max: u32 },

    #[error("operands live in different cubes: {left} vs {right}")]
    ParamsMismatch { left: CubeParams, right: CubeParams },

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("invalid lower-half variant {variant} for {params}: {reason}")]
    InvalidVariant {
        variant: String,
        params: CubeParams,
        reason: String,
    },

    #[error("point {point} is not in the lower half ({variant}): {reason}")]
    NotInLowerHalf {
        point: String,
        variant: String,
        reason: String,
    },

    #[error("the map needs dimension n >= 2, got n={n}")]
    DimensionTooSmall { n: u32 },

    #[error("budget exceeded: {what} needs {needed} but the budget is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        limit: u64,
    },
}

impl Error {
    /// Errors caused by inputs falling outside the mathematical domain of an
    /// operation, as opposed to malformed input or resource limits.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::NotInLowerHalf { .. } | Error::DimensionTooSmall { .. }
        )
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
