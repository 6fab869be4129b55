use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvError {
    #[error("real metric is not J-invariant (deviation {0:.3e})")]
    NotJInvariant(f64),
    #[error("matrix is not positive definite")]
    NotPositive,
    #[error("finite-difference stencil leaves the chart domain at {0}")]
    StencilOutOfDomain(String),
    #[error("analytic and finite-difference derivatives disagree by {got:.3e} (tolerance {tol:.3e}) in {what}")]
    CrossCheckFailed { what: String, got: f64, tol: f64 },
    #[error("integrand is not finite at node {0}")]
    NonFiniteIntegrand(usize),
    #[error("metric is singular at the evaluation point")]
    SingularMetric,
    #[error("manifold {0} supports pointwise evaluation only")]
    QuadratureUnsupported(String),
    #[error("discrete Gauduchon null vector changes sign (min/max ratio {0:.3e})")]
    NoPositiveNullVector(f64),
    #[error("{what} did not converge after {iters} iterations")]
    NonConvergence { what: String, iters: usize },
    #[error("metric is not Gauduchon (residual {0:.3e})")]
    NotGauduchon(f64),
    #[error("characteristic number {0} is missing")]
    MissingMonomial(String),
    #[error("metric fails positive-definiteness screening at node {0}")]
    NotPositiveDefinite(usize),
    #[error("unknown manifold id {0:?}")]
    UnknownId(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o failure: {0}")]
    IoFailure(String),
}

pub type Result<T> = std::result::Result<T, CurvError>;
