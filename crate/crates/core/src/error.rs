use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("covering is empty")]
    EmptyCovering,

    #[error("duplicate anchor: entries {first} and {second} coincide")]
    DuplicateAnchor { first: usize, second: usize },

    #[error("grid too coarse: spacing {spacing} exceeds half the finest box width ({limit})")]
    GridTooCoarse { spacing: f64, limit: f64 },

    #[error("covering gap at bin {bin}")]
    CoveringGap { bin: usize },

    #[error("time step must divide signal length (a = {step}, L = {len})")]
    TimeStepDoesNotDivide { step: f64, len: usize },

    #[error("not a frame: covering gap (A = {lower:e}, B = {upper:e})")]
    NotAFrame { lower: f64, upper: f64 },

    #[error("window of channel {channel} is nonzero at bin {bin} outside its declared support")]
    SupportViolation { channel: usize, bin: usize },

    #[error("alpha must be positive (tau = {tau}, p = {p})")]
    AlphaNotPositive { tau: f64, p: f64 },

    #[error("exact recovery reached; shrink range")]
    ExactRecovery,

    #[error("unknown corpus kind '{0}'")]
    UnknownCorpusKind(String),

    #[error("signal length {len} exceeds dense-oracle limit {max}")]
    TooLarge { len: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
