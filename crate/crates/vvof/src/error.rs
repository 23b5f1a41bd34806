use thiserror::Error;

/// Errors surfaced by the solver and its front ends.
#[derive(Debug, Error)]
pub enum VofError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("degenerate interface normal (m = 0)")]
    DegenerateNormal,

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("CFL limit exceeded at step {step}: {cfl:.4} >= {limit:.4}")]
    CflViolation { step: usize, cfl: f64, limit: f64 },

    #[error("interface vanished at t = {t}")]
    InterfaceVanished { t: f64 },

    #[error("bubble radius collapsed to zero")]
    RadiusCollapsed,

    #[error("open contour cannot be measured")]
    OpenContour,

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, VofError>;
