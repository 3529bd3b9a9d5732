use thiserror::Error;

/// Errors raised by the entanglement routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computed quantity is unphysical or not finite.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The extended-precision evaluator hit its precision ceiling.
    #[error("precision exhausted after {bits} bits: {context}")]
    PrecisionExhausted { bits: usize, context: String },

    /// Two probe labelings of a symmetric state disagreed.
    #[error("probe asymmetry: probe {first} gives {first_value:e}, probe {second} gives {second_value:e}")]
    ProbeAsymmetry {
        first: usize,
        first_value: f64,
        second: usize,
        second_value: f64,
    },

    /// Should not happen; indicates a broken internal invariant.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
