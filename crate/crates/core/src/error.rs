use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series did not converge after {terms} terms (estimated error {est_error:e})")]
    NonConvergence { terms: usize, est_error: f64 },

    #[error("argument outside the supported domain: {0}")]
    DomainError(String),

    #[error("pole of the Gamma function at {re} + {im}i")]
    PoleError { re: f64, im: f64 },

    #[error("profile evaluated at its singular point x = {0}")]
    SingularEvaluation(f64),

    #[error("spatial dimension {0} is not supported (only 1 and 3)")]
    UnsupportedDimension(usize),

    #[error("quadrature did not reach tolerance: value {value:e}, estimated error {est_error:e}, requested {tol:e}")]
    QuadratureFailure { value: f64, est_error: f64, tol: f64 },

    #[error("CFL condition violated: dt * speed = {courant:e} exceeds dx = {dx:e}")]
    CflViolation { courant: f64, dx: f64 },

    #[error("r = {r} lies outside the cone of radius {radius}")]
    ConeBoundary { r: f64, radius: f64 },

    #[error("cone radius vanishes between t0 = {t0} and t = {t}")]
    ConeDegenerate { t0: f64, t: f64 },

    #[error("ODE integration failed at t = {t}: {reason}")]
    IntegrationFailure { t: f64, reason: String },

    #[error("grid too coarse or too short for the residual stencil: {0}")]
    InsufficientGrid(String),

    #[error("time window too large: {0}")]
    WindowTooLarge(String),

    #[error("solution has a non-negligible imaginary part {imag:e} (real part {real:e})")]
    NonRealSolution { real: f64, imag: f64 },

    #[error("operator family not supported here: {0}")]
    UnsupportedFamily(String),

    #[error("invalid configuration field `{field}`: {reason}")]
    ConfigError { field: String, reason: String },

    #[error("at node (x = {x}, t = {t}): {source}")]
    AtNode {
        x: f64,
        t: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn config(field: &str, reason: impl Into<String>) -> Self {
        Error::ConfigError {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::DomainError(msg.into())
    }

    /// Attach the grid node to an error, once.
    pub fn at_node(self, x: f64, t: f64) -> Self {
        match self {
            e @ Error::AtNode { .. } => e,
            e => Error::AtNode {
                x,
                t,
                source: Box::new(e),
            },
        }
    }

    /// Innermost error with node wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtNode { source, .. } => source.root(),
            e => e,
        }
    }
}
