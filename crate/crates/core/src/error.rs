use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("division by zero in a cyclotomic field")]
    DivisionByZero,

    #[error("conductor {from} does not divide target conductor {to}")]
    ConductorMismatch { from: u64, to: u64 },

    #[error("matrix shape mismatch: {0}")]
    MatrixShape(String),

    #[error("braid letter {letter} out of range for {strands} strand(s)")]
    InvalidBraidLetter { letter: i32, strands: usize },

    #[error("malformed braid: {0}")]
    MalformedBraid(String),

    #[error("unknown component label {label} (there are {components} component(s))")]
    InvalidComponent { label: usize, components: usize },

    #[error("cannot delete: at least one component must remain")]
    ComponentUnderflow,

    #[error("branch is non-reduced input: {0}")]
    NonReducedInput(String),

    #[error(
        "composed series vanishes up to truncation order {truncation}; increase the truncation"
    )]
    InsufficientTruncation { truncation: u32 },

    #[error("missing branch representation: {0}")]
    MissingRepresentation(String),

    #[error("malformed presentation: {0}")]
    MalformedPresentation(String),

    #[error("arity mismatch: expected {expected} coordinate(s), got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("contradiction: {0}")]
    Contradiction(String),

    #[error("evaluation budget exceeded: {required} evaluation(s) required, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },

    #[error("scan coverage mismatch: {0}")]
    CoverageMismatch(String),

    #[error("unknown corpus entry `{0}`")]
    UnknownCorpus(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
