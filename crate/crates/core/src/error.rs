use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("contraction ratio {0} is not in (-1, 0) or (0, 1)")]
    RatioOutOfRange(String),
    #[error("map with ratio {ratio} and offset {offset} sends [0,1] outside [0,1]")]
    ImageEscapes { ratio: String, offset: String },
    #[error("digit {0:?} appears more than once")]
    DuplicateDigit(Vec<usize>),
    #[error("digit set is empty")]
    EmptyDigitSet,
    #[error("expected {expected} weights, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("weight {index} is negative")]
    NegativeWeight { index: usize },
    #[error("weights sum to {0}, not 1")]
    SumNotOne(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("word is empty")]
    EmptyWord,
    #[error("ratio list is empty")]
    EmptyList,
    #[error("not a permutation of the coordinates: {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("no coordinate ordering permutation exists (not Lalley-Gatzouras)")]
    NotLalleyGatzouras,
    #[error("not a two-dimensional Sierpinski carpet: {0}")]
    NotSierpinskiCarpet(String),
    #[error("typical-word construction needs strictly positive weights")]
    NonPositiveWeights,
    #[error("enumeration of {size} words exceeds the cap {cap}")]
    EnumerationCapExceeded { size: u128, cap: u64 },
    #[error("no word of length at most {0} maps the cube into its interior")]
    NoInteriorWord(usize),
    #[error("hypotheses violated: {}", .0.join("; "))]
    HypothesesViolated(Vec<String>),
    #[error("the pruned word set is empty")]
    EmptySubsystem,
    #[error("ball around {center:?} of radius {rho} holds {found} points (need at least {needed})")]
    InsufficientPoints { center: Vec<f64>, rho: f64, found: usize, needed: usize },
    #[error("coordinate {coordinate} has no swap letter for digit {digit:?}")]
    ReducibleCoordinate { coordinate: usize, digit: Vec<usize> },
    #[error("prefix of length {len} is shorter than the required {needed}")]
    PrefixTooShort { len: usize, needed: usize },
    #[error("template is irreducible; no flatness certificate applies")]
    NotReducible,
    #[error("cannot render a sponge of dimension {0}")]
    UnsupportedDimension(usize),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name, used in error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedInput(_) => "MalformedInput",
            Error::FileNotFound(_) => "FileNotFound",
            Error::RatioOutOfRange(_) => "RatioOutOfRange",
            Error::ImageEscapes { .. } => "ImageEscapes",
            Error::DuplicateDigit(_) => "DuplicateDigit",
            Error::EmptyDigitSet => "EmptyDigitSet",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NegativeWeight { .. } => "NegativeWeight",
            Error::SumNotOne(_) => "SumNotOne",
            Error::InvalidWeights(_) => "InvalidWeights",
            Error::EmptyWord => "EmptyWord",
            Error::EmptyList => "EmptyList",
            Error::InvalidPermutation(_) => "InvalidPermutation",
            Error::NotLalleyGatzouras => "NotLalleyGatzouras",
            Error::NotSierpinskiCarpet(_) => "NotSierpinskiCarpet",
            Error::NonPositiveWeights => "NonPositiveWeights",
            Error::EnumerationCapExceeded { .. } => "EnumerationCapExceeded",
            Error::NoInteriorWord(_) => "NoInteriorWord",
            Error::HypothesesViolated(_) => "HypothesesViolated",
            Error::EmptySubsystem => "EmptySubsystem",
            Error::InsufficientPoints { .. } => "InsufficientPoints",
            Error::ReducibleCoordinate { .. } => "ReducibleCoordinate",
            Error::PrefixTooShort { .. } => "PrefixTooShort",
            Error::NotReducible => "NotReducible",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
            Error::Io(_) => "Io",
        }
    }

    /// True for errors caused by the input documents rather than by the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::MalformedInput(_)
                | Error::FileNotFound(_)
                | Error::RatioOutOfRange(_)
                | Error::ImageEscapes { .. }
                | Error::DuplicateDigit(_)
                | Error::EmptyDigitSet
                | Error::LengthMismatch { .. }
                | Error::NegativeWeight { .. }
                | Error::SumNotOne(_)
                | Error::InvalidWeights(_)
                | Error::InvalidPermutation(_)
                | Error::Io(_)
        )
    }
}
