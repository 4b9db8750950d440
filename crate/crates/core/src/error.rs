use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// Every failure is reported through this one enum so that the CLI can map
/// it onto an exit code without knowing which layer produced it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("residue requested for an element of negative valuation")]
    NegativeValuation,
    #[error("function is not defined at the point")]
    NotDefinedAt,
    #[error("numerator and denominator both vanish at the point")]
    Indeterminate,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("the line lies inside the denominator locus")]
    LineInDenominatorLocus,
    #[error("degenerate direction: the substitution line does not separate the function")]
    DegenerateDirection,
    #[error("residue requested for an element of nonzero valuation")]
    NonzeroValuation,
    #[error("index {index} out of range (only {len} constraints)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("cone value is identically -1")]
    IdenticallyMinusOne,
    #[error("structural error: {0}")]
    Structural(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parities are dependent over F2: inputs {combination:?} sum to zero")]
    DependentParities { combination: Vec<usize> },
    #[error("valuation mismatch: {0}")]
    ValuationMismatch(String),
    #[error("expression is not a polynomial")]
    NotAPolynomial,
    #[error("point has {got} coordinates, expected at least {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("residue order does not apply to this residue field")]
    ResidueOrderMismatch,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("certificate format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
