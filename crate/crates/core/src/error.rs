use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweError {
    #[error("unsupported polynomial degree {degree} (maximum {max})")]
    UnsupportedDegree { degree: usize, max: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("negative water height {h} outside the admissible domain")]
    NegativeHeight { h: f64 },

    #[error("non-finite input to {0}")]
    NonFinite(&'static str),

    #[error("entropy variables do not correspond to a wet state (h = {h})")]
    NonInvertibleEntropyVars { h: f64 },

    #[error("limiter precondition violated: element mean height {mean} < 0")]
    NegativeMean { mean: f64 },

    #[error("non-finite value in {component} at element {element}, node {node}")]
    NotFinite {
        element: usize,
        node: usize,
        component: &'static str,
    },

    #[error("no subcritical equilibrium height for m = {m}, E = {energy}, b = {b}")]
    InfeasibleEquilibrium { m: f64, energy: f64, b: f64 },

    #[error("invalid time {0}: must be non-negative")]
    NegativeTime(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("step {step} failed: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<SweError>,
    },
}

impl SweError {
    /// True when the error, or the error it wraps, reports a NaN or infinity.
    pub fn is_non_finite(&self) -> bool {
        match self {
            SweError::NotFinite { .. } | SweError::NonFinite(_) => true,
            SweError::StepFailed { source, .. } => source.is_non_finite(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, SweError>;
