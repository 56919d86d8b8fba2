use thiserror::Error;

pub type Result<T> = std::result::Result<T, GandhiError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GandhiError {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested fixed-point precision cannot represent the quantity.
    #[error("precision error: {bits} fractional bits cannot represent 2^-{needed}")]
    Precision { bits: u64, needed: u64 },

    /// An exact evaluation would need more bits than the configured budget.
    #[error("resource error: n={n} needs a {required_bits}-bit denominator, budget is {budget_bits} bits")]
    Budget {
        n: usize,
        required_bits: String,
        budget_bits: u64,
    },

    /// Precision doubling ran past the configured ceiling without a conclusive bracket.
    #[error("resource error: interval evaluation for n={n} still inconclusive at {max_bits} bits")]
    PrecisionExhausted { n: usize, max_bits: u64 },

    /// A formula result disagreed with the sieve oracle.
    #[error("oracle mismatch at n={n}: formula gave {formula}, sieve gave {oracle}")]
    OracleMismatch { n: usize, formula: u64, oracle: u64 },
}

impl GandhiError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        GandhiError::Domain(msg.into())
    }

    /// True for refusals caused by budgets or precision ceilings.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            GandhiError::Budget { .. } | GandhiError::PrecisionExhausted { .. }
        )
    }
}
