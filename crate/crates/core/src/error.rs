use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A configuration value is out of its admissible range.
    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    /// A function argument lies outside the function's domain.
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A link whose rate is not strictly positive cannot carry traffic.
    #[error("infeasible link: rate {rate} bit/s is not positive")]
    InfeasibleLink { rate: f64 },

    /// More slots were requested than the frame holds.
    #[error("slot budget violated: {used} slots requested, {budget} available")]
    BudgetViolation { used: u64, budget: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Exhaustive search would exceed the enumeration budget.
    #[error("instance too large: {configurations} configurations exceed the budget of {budget}")]
    Size { configurations: f64, budget: u64 },

    /// A schedule violates its own invariants. Indicates a scheduler bug.
    #[error("inconsistent schedule: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            field,
            reason: reason.into(),
        }
    }
}
