use thiserror::Error;

use crate::distortion::DistortionCertificate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),

    #[error("arclength parameter {value} outside [0, {len})")]
    OutOfRange { value: f64, len: f64 },

    #[error("curve is not embedded: edges {0} and {1} touch")]
    NotEmbedded(usize, usize),

    #[error(
        "cell budget of {} expansions exhausted; partial interval [{}, {}]",
        .0.cells_expanded, .0.lo, .0.hi
    )]
    BudgetExceeded(Box<DistortionCertificate>),

    #[error("invalid plat spec: {0}")]
    InvalidSpec(String),

    #[error("plat closure has {components} components, not a knot: {reason}")]
    NotAKnot { components: usize, reason: String },

    #[error("built curve self-intersects: edges {0} and {1} are at distance 0")]
    SelfIntersecting(usize, usize),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("clearance must be positive, got {0}")]
    NonPositiveClearance(f64),

    #[error("twist handedness is not alternating: {0}")]
    NotAlternating(String),

    #[error("start curve clearance {clearance} is below the floor {floor}")]
    InfeasibleStart { clearance: f64, floor: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed curve file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
