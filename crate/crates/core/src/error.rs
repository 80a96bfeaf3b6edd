use thiserror::Error;

pub type Result<T> = std::result::Result<T, FracError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracError {
    #[error("gamma pole at argument {arg}")]
    GammaPole { arg: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("function provides derivatives up to order {available}, order {needed} requested")]
    MissingDerivative { needed: usize, available: usize },

    #[error(
        "quadrature did not converge after {panels} panels (last {last:e}, previous {previous:e})"
    )]
    QuadratureNonConvergence {
        last: f64,
        previous: f64,
        panels: usize,
    },

    #[error("series did not converge within {terms} terms")]
    SeriesNonConvergence { terms: usize },

    #[error("integration produced a non-finite state at t = {t}")]
    IntegrationBlowUp { t: f64 },

    #[error("newton iteration did not converge; residual history {history:?}")]
    NewtonNonConvergence { history: Vec<f64> },

    #[error("singular linear system")]
    SingularSystem,

    #[error("reduction failed: {0}")]
    ReductionFailure(String),
}

impl FracError {
    /// Short machine-readable category used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            FracError::GammaPole { .. } => "gamma_pole",
            FracError::InvalidInput(_) => "invalid_input",
            FracError::MissingDerivative { .. } => "missing_derivative",
            FracError::QuadratureNonConvergence { .. } => "quadrature_nonconvergence",
            FracError::SeriesNonConvergence { .. } => "series_nonconvergence",
            FracError::IntegrationBlowUp { .. } => "integration_blowup",
            FracError::NewtonNonConvergence { .. } => "newton_nonconvergence",
            FracError::SingularSystem => "singular_system",
            FracError::ReductionFailure(_) => "reduction_failure",
        }
    }
}
