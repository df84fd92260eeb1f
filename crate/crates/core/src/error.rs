use crate::ode::CurveState;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (e.g. a non-positive height).
    #[error("domain error: {0}")]
    Domain(String),

    /// Inputs are individually valid but inconsistent with each other.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("integration failed at s = {}: {reason}", state.s)]
    Integration { state: CurveState, reason: String },

    #[error("classification failed: {0}")]
    Classification(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn require_positive_height(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("height must be positive, got z = {z}")))
    }
}
