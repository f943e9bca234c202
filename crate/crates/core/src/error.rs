use thiserror::Error;

#[derive(Debug, Error)]
pub enum IsssError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension {0} outside the supported range 1..=4")]
    UnsupportedDimension(usize),

    #[error("contraction ratio {0} is not in (0, 1)")]
    InvalidRatio(f64),

    #[error("matrix is not orthogonal (deviation {0:e})")]
    NotOrthogonal(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("scale {scale:e} is below twice the cloud resolution {resolution:e}")]
    ResolutionTooCoarse { scale: f64, resolution: f64 },

    #[error("{what}: {count} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, count: usize, cap: usize },

    #[error("code space is not closed under the left shift; violating pairs (1-based): {}", fmt_pairs(.0))]
    NotShiftClosed(Vec<(usize, usize)>),

    #[error("subshift is empty after pruning dead-end symbols")]
    EmptySubshift,

    #[error("series diverges at t = {t}: growth estimate {growth} >= 1")]
    Divergent { t: f64, growth: f64 },

    #[error("system has no probability vector")]
    MissingProbabilities,

    #[error("map {index} does not send the ambient box into itself")]
    NotInvariant { index: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("config error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_pairs(pairs: &[(usize, usize)]) -> String {
    pairs
        .iter()
        .map(|(i, j)| format!("({},{})", i + 1, j + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

pub type Result<T> = std::result::Result<T, IsssError>;
