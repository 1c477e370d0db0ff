use alloc::string::String;

/// Errors produced by the coverage-depth library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter combination violates an invariant, e.g. `pmds requires m=2`.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An argument is outside the domain of a mathematical operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A state space would exceed the configured budget.
    #[error("state space of {states} states exceeds the budget of {budget}")]
    Budget { states: u64, budget: u64 },

    /// A simulated trial did not decode within the hard draw cap.
    #[error("trial did not decode after {draws} draws")]
    DrawCap { draws: u64 },

    /// The requested quantile lies in the histogram overflow region.
    #[error("quantile {level} lies beyond the histogram support (ecdf_max = {ecdf_max})")]
    QuantileOverflow { level: f64, ecdf_max: u32 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidParams(alloc::format!($($arg)*))
    };
}

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::error::Error::Domain(alloc::format!($($arg)*))
    };
}

pub(crate) use {domain, invalid};
