use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported prime {0}; expected 3, 5 or 7")]
    UnsupportedPrime(i64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("value {value} is out of range for F_{p}")]
    OutOfRange { value: i64, p: u8 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vectors are not linearly independent")]
    NotIndependent,
    #[error("point is not contained in the domain subspace")]
    NotInDomain,
    #[error("{what}: {requested} exceeds budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        budget: u128,
    },
    #[error("point set is empty")]
    EmptySet,
    #[error("level set is empty")]
    EmptyLevelSet,
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("dimension {n} exceeds the number of colours {r}")]
    DimensionTooLarge { n: usize, r: usize },
    #[error("no density increment found with gain at least {threshold}")]
    IncrementNotFound { threshold: String },
    #[error("system has {rows} rows but only {max} tensor-cube coordinates")]
    TooManyRows { rows: usize, max: usize },
    #[error("degenerate coefficients: {0}")]
    DegenerateCoefficients(String),
    #[error("coefficients sum to {0} instead of zero")]
    CoefficientSumNonzero(u8),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub(crate) fn budget_check(what: &'static str, requested: u128, budget: u128) -> Result<()> {
    if requested > budget {
        Err(Error::BudgetExceeded {
            what,
            requested,
            budget,
        })
    } else {
        Ok(())
    }
}
