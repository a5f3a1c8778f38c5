use thiserror::Error;

/// Errors raised by the geometry kernels, simulators, planners and harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("robot is embedded in an obstacle at {0:?}")]
    Embedded(Vec<f64>),

    #[error("step cap of {0} exceeded (degenerate geometry)")]
    StepCap(usize),

    #[error("point {0:?} lies outside the grid extent")]
    OutOfGrid(Vec<f64>),

    #[error("cell index {0:?} out of range")]
    CellOutOfRange(Vec<i64>),

    #[error("illegal color transition {from:?} -> {to:?}")]
    IllegalTransition {
        from: crate::grid::Color,
        to: crate::grid::Color,
    },

    #[error("seed cell is not White")]
    SeedNotWhite,

    #[error("invalid planner configuration: {0}")]
    Config(String),

    #[error("invalid scene: {0}")]
    Scene(String),

    #[error("subdivision restart cap of {0} exceeded")]
    RestartCap(usize),

    #[error("oracle node budget exceeded ({nodes} > {budget})")]
    OracleBudget { nodes: u64, budget: u64 },

    #[error("scene hash mismatch: run was recorded on {run}, scene is {scene}")]
    SceneHash { run: String, scene: String },

    #[error("adversary: {0}")]
    Adversary(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
