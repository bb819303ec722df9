use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable contexts differ")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator factor {0} has no invertible lowest-degree part")]
    DenominatorNotUnit(String),
    #[error("infinite product over {0} does not converge in the (q,t)-grading")]
    NonConvergent(String),
    #[error("not a tableau: {0}")]
    NotATableau(String),
    #[error("apparent denominator did not cancel: {0}")]
    DenominatorSurvives(String),
    #[error("eigenvalues of {0} and {1} coincide")]
    EigenvalueCollision(String, String),
    #[error("coefficient outside Pol_lambda is nonzero at {0}")]
    TerminationFailure(String),
    #[error("residual nonzero at {0}")]
    ResidualNonzero(String),
    #[error("mismatch at {0}")]
    MismatchAt(String),
    #[error("not stabilized: {0}")]
    NotStabilized(String),
    #[error("identity fails: {0}")]
    IdentityFails(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
