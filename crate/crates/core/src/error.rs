use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^31")]
    InvalidModulus(u64),

    #[error("operands live in different fields (p = {0} and p = {1})")]
    ModulusMismatch(u64, u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("the zero polynomial has every field element as a root")]
    ZeroPolynomial,

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("unsupported system shape: {0}")]
    Shape(String),

    #[error("{what} needs {required} steps, above the guard of {limit}")]
    GuardExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("tuple is not a member of the solution set")]
    NotASolution,

    #[error("solution index {index} out of range for a set of {eta} solutions")]
    IndexOutOfRange { index: usize, eta: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn guard(what: &'static str, required: u128, limit: u128) -> Self {
        Error::GuardExceeded {
            what,
            required,
            limit,
        }
    }
}

/// Returns `p^e` when it does not exceed `limit`, otherwise a guard error.
pub(crate) fn checked_power(what: &'static str, p: u64, e: usize, limit: u128) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(p as u128);
    }
    if acc > limit {
        Err(Error::guard(what, acc, limit))
    } else {
        Ok(acc)
    }
}
