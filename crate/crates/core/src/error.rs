use thiserror::Error;

/// Errors produced by the vietlab core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("undefined diameter: empty subset")]
    EmptySubset,
    #[error("point index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("nerve requires explicit cover")]
    NerveRequiresExplicit,
    #[error("not a filtration: {0}")]
    NotAFiltration(String),
    #[error("sample too large: {estimate} measures exceeds the cap of {cap}")]
    SampleTooLarge { estimate: u128, cap: usize },
    #[error("path may exit thickening: {0}")]
    PathMayExit(String),
    #[error("ζ ∉ P_𝒰: set {0} misses the support of ζ")]
    NotInPSystem(usize),
    #[error("invalid disjoint system: {0}")]
    InvalidSystem(String),
    #[error("measure is outside the neighborhood: {0}")]
    OutsideNeighborhood(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
