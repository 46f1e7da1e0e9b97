use thiserror::Error;

/// Errors raised by the numerical pipelines.
///
/// Variants split into precondition violations (bad input, mapped to exit
/// code 2 by the CLI) and numerical failures (exit code 3).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cocycle overflow: matrix entries exceed {limit:e}")]
    CocycleOverflow { limit: f64 },

    #[error("degenerate gap: singular values {s1} and {s2} coincide within tolerance")]
    DegenerateGap { s1: f64, s2: f64 },

    #[error("non-termination: reduction exceeded {0} side-pairing steps")]
    NonTermination(usize),

    #[error("budget exceeded: more than {0} group elements")]
    BudgetExceeded(usize),

    #[error("empty set: no hyperbolic element with translation length <= {0}")]
    EmptySet(f64),

    #[error("insufficient truncation: successive radii differ by {0:e} at probe points")]
    InsufficientTruncation(f64),

    #[error("too deep: Im = {0} is below the evaluation threshold")]
    TooDeep(f64),

    #[error("step underflow: adaptive step {0:e} below minimum")]
    StepUnderflow(f64),

    #[error("boundary hit: target point lies on a cell-boundary image")]
    BoundaryHit,

    #[error("elementary representation: {0}")]
    ElementaryRepresentation(String),

    #[error("no scaling window: {0}")]
    NoScalingWindow(String),

    #[error("newton stall after {0} iterations")]
    NewtonStall(usize),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for input/precondition problems, false for numerical breakdown.
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition(_) | Error::EmptySet(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
