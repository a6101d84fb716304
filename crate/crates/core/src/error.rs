// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a negative discriminant (must be < 0 and congruent to 0 or 1 mod 4)")]
    InvalidDiscriminant(i64),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("discriminant {0} is outside the supported range |D| <= 2^40")]
    DiscriminantOutOfRange(i64),

    #[error("form [{a}, {b}, {c}] is not primitive positive definite")]
    InvalidForm { a: i64, b: i64, c: i64 },

    #[error("{what} = {value} exceeds the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        value: u64,
        budget: u64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "direct ({direct}) and accelerated ({accelerated}) estimates of E(D) disagree beyond the combined bound {bound:e}"
    )]
    EstimatorDisagreement {
        direct: f64,
        accelerated: f64,
        bound: f64,
    },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed checkpoint: {0}")]
    Checkpoint(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
