use thiserror::Error;

/// Errors produced by grid construction, state conversions and time marching.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("geometry exponent must be 0, 1 or 2, got {0}")]
    InvalidAlpha(i64),

    #[error("grid construction failed: {0}")]
    Grid(String),

    #[error("invalid state{}: rho = {rho:.6e}, p = {pressure:.6e}",
            cell.map(|c| format!(" in cell {c}")).unwrap_or_default())]
    InvalidState {
        rho: f64,
        pressure: f64,
        cell: Option<usize>,
    },

    #[error("field representation mismatch: expected {expected}, found {found}")]
    RepresentationMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("in RK stage {stage}: {source}")]
    InStage {
        stage: usize,
        #[source]
        source: Box<SolverError>,
    },

    #[error("solver diverged: step limit {max_steps} exceeded at t = {time:.6e}")]
    Divergence { max_steps: u64, time: f64 },

    #[error("at step {step}, t = {time:.6e}: {source}")]
    AtStep {
        step: u64,
        time: f64,
        #[source]
        source: Box<SolverError>,
    },

    #[error("diagnostics: {0}")]
    Diagnostics(String),
}

impl SolverError {
    /// Attach a cell index to an invalid-state error, leaving other variants alone.
    pub fn with_cell(self, cell: usize) -> Self {
        match self {
            SolverError::InvalidState { rho, pressure, .. } => SolverError::InvalidState {
                rho,
                pressure,
                cell: Some(cell),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, SolverError>;
