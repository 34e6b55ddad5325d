use thiserror::Error;

pub type Result<T> = std::result::Result<T, PlateError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlateError {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The ascending series could not be summed within the configured budget.
    #[error("series out of range: z = {z}, l = {l}, d = {d} ({reason})")]
    Range {
        z: f64,
        l: u32,
        d: u32,
        reason: &'static str,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A proven bracket or identity failed numerically; indicates a kernel bug.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("quadrature did not converge: order {order} gives {coarse}, order {fine_order} gives {fine}")]
    Convergence {
        order: usize,
        coarse: f64,
        fine_order: usize,
        fine: f64,
    },
}

pub(crate) fn domain(msg: impl Into<String>) -> PlateError {
    PlateError::Domain(msg.into())
}
