use thiserror::Error;

/// Errors produced by the library.
#[derive(Error, Debug)]
pub enum Error {
    /// Malformed graph or sample input, with a 1-based line number.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The sample fails a genericity certificate (rank-deficient down-set
    /// block, singular clique marginal, singular slice pivot).
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// A matrix that must be invertible is (numerically) singular.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// A matrix does not stabilize the model, or no automorphism/zero-pattern
    /// decomposition of it exists.
    #[error("not a member of the stabilizer group: {0}")]
    NotInGroup(String),

    /// Operation requires a chordal graph.
    #[error("graph is not chordal")]
    NotChordal,

    /// Operation requires the group to act transitively.
    #[error("group does not act transitively on this model")]
    NotTransitive,

    /// Sample size below the minimum for the requested operation.
    #[error("sample size {n} is below the required minimum {min}")]
    SampleTooSmall { n: usize, min: usize },

    /// A documented scale or argument limit was exceeded.
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    /// Invalid argument combination or ill-formed domain object.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numeric routine failed to meet its tolerance.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for errors caused by a degenerate (measure-zero) sample, which
    /// the CLI maps to a dedicated exit code.
    pub fn is_degenerate_sample(&self) -> bool {
        matches!(self, Error::DegenerateSample(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
