use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("class {0} has no members")]
    EmptyClass(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("label index {index} out of range for {n_labels} labels")]
    LabelOutOfRange { index: usize, n_labels: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("not a probability distribution: {0}")]
    NotADistribution(String),
    #[error("baseline accuracy must be positive, got {0}")]
    ZeroBaseline(f64),
    #[error("parameter out of range: {0}")]
    RatioOutOfRange(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("channel {channel} out of range for a series with {channels} channels")]
    ChannelOutOfRange { channel: usize, channels: usize },
    #[error("series too short: length {0}, at least 7 required")]
    SeriesTooShort(usize),
    #[error("only one class present")]
    SingleClass,
    #[error("feature width {got} does not match model width {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("channel {channel} of series {series} has no observed values")]
    AllMissingChannel { series: usize, channel: usize },
    #[error("inconsistent header: {0}")]
    InconsistentHeader(String),
    #[error("impute policy: {0}")]
    ImputePolicy(String),
    #[error("line {line}, column {column}: {kind}")]
    Parse {
        line: usize,
        column: usize,
        kind: ParseErrorKind,
    },
    #[error("io: {0}")]
    Io(String),
    #[error("config: {0}")]
    Config(String),
}

/// Fatal `.ts` parse failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseErrorKind {
    #[error("record has {found} channels, expected {expected}")]
    RaggedRecord { expected: usize, found: usize },
    #[error("channels of one record have different lengths ({0} vs {1})")]
    RaggedChannels(usize, usize),
    #[error("non-numeric value {0:?}")]
    NonNumericValue(String),
    #[error("no @data section")]
    MissingDataSection,
    #[error("unknown class label {0:?}")]
    UnknownLabel(String),
    #[error("record without class label")]
    MissingLabel,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("dataset has no class labels")]
    Unlabeled,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
