use thiserror::Error;

/// Errors surfaced by the numerical routines.
///
/// `Domain` and `Unsupported` are caller mistakes; `Numerical` variants report
/// honest failures of a computation that was set up correctly (step-size
/// underflow, pole crossing, non-convergence) together with enough context to
/// diagnose them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {context}: {message}")]
    Domain { context: &'static str, message: String },

    #[error("unsupported input for {context}: {message}")]
    Unsupported { context: &'static str, message: String },

    #[error("quadrature order {order} too low for N = {n} (need at least 2N)")]
    QuadratureTooCoarse { order: usize, n: usize },

    #[error("ODE step size underflow at s = {at}: {message} (last good point s = {at})")]
    StepUnderflow { at: f64, message: String },

    #[error("transcendent trajectory truncated at s = {at}: {message}")]
    PoleTruncation { at: f64, message: String },

    #[error("square-root branch violated at s = {at}: radicand = {radicand}")]
    BranchViolation { at: f64, radicand: f64 },

    #[error("iteration failed to converge in {context}: {message}")]
    NonConvergence { context: &'static str, message: String },

    #[error("precondition violated in {context}: {message}")]
    Precondition { context: &'static str, message: String },
}

impl Error {
    pub fn domain(context: &'static str, message: impl Into<String>) -> Self {
        Error::Domain { context, message: message.into() }
    }

    pub fn unsupported(context: &'static str, message: impl Into<String>) -> Self {
        Error::Unsupported { context, message: message.into() }
    }

    pub fn precondition(context: &'static str, message: impl Into<String>) -> Self {
        Error::Precondition { context, message: message.into() }
    }

    pub fn non_convergence(context: &'static str, message: impl Into<String>) -> Self {
        Error::NonConvergence { context, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
