use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),

    #[error("graph spec `{spec}`: {reason}")]
    BadGraphSpec { spec: String, reason: String },

    #[error("graph6: {0}")]
    Graph6(String),

    #[error("edge ({0}, {1}) is not in the graph")]
    EdgeAbsent(usize, usize),

    #[error("graph is not 3-regular")]
    NotCubic,

    #[error("graph is not regular")]
    NotRegular,

    #[error("no valid double edge swap found after {0} attempts")]
    NoValidSwap(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} of size {size} exceeds the cap of {cap}")]
    SizeCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid angle schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("variable {0} has no assigned value")]
    UnassignedVariable(usize),

    #[error("mixer angle beta[{index}] = {beta} makes tan(beta) singular")]
    SingularMixerAngle { index: usize, beta: f64 },

    #[error("calibration failure: {0}")]
    Calibration(String),

    #[error("no assignment of weight {weight} with cost {cost} exists")]
    NoReferenceAssignment { weight: usize, cost: u32 },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
