//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval bounds [{lo}, {hi}]")]
    InvalidBounds { lo: f64, hi: f64 },
    #[error("negative interval radius {0}")]
    NegativeRadius(f64),
    #[error("non-finite value in interval construction")]
    NonFinite,
    #[error("interval arithmetic overflow to a non-finite bound")]
    Overflow,
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("square root of an interval reaching below zero (lower bound {0})")]
    NegativeSqrt(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("midpoint matrix is numerically singular")]
    SingularMidpoint,
    #[error("enclosure could not be certified after {0} refinement iterations")]
    EnclosureNotCertified(usize),
    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },
    #[error("non-finite sample at position {0}")]
    NonFiniteSample(usize),
    #[error("maximum lag {tau_max} out of range for {len} samples")]
    LagOutOfRange { tau_max: usize, len: usize },
    #[error("decimation step must be at least 1")]
    ZeroDecimation,
    #[error("split fraction {0} outside (0, 1)")]
    BadSplitFraction(f64),
    #[error("invalid term: {0}")]
    BadTerm(String),
    #[error("csv line {line}: {msg}")]
    CsvParse { line: usize, msg: String },
    #[error("target vector has zero energy")]
    ZeroEnergyTarget,
    #[error("rank-deficient regressor matrix; offending columns: {}", .0.join(", "))]
    RankDeficient(Vec<String>),
    #[error("empty term ranking")]
    EmptyRanking,
    #[error("no candidate model size could be fitted")]
    NoFittableSize,
    #[error("zero-variance series: {0}")]
    ZeroVariance(&'static str),
    #[error("zero RMSE denominator (constant validation data)")]
    ZeroDenominator,
    #[error("RMSE denominator interval contains zero")]
    DenominatorContainsZero,
    #[error("insufficient history: need {need} samples, got {got}")]
    InsufficientHistory { need: usize, got: usize },
    #[error("training failed: {0}")]
    Training(String),
    #[error("model file format: {0}")]
    ModelFormat(String),
    #[error("simulation diverged at step {0}")]
    SimulationDiverged(usize),
    #[error("report consistency: {0}")]
    ReportInvariant(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Tag an error with the pipeline stage it surfaced in.
    pub fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Name of the pipeline stage this error was tagged with, if any.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            Error::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }
}
