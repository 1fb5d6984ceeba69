use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("d = {0} is not squarefree")]
    NotSquarefree(i64),

    #[error("d = {0} does not define a quadratic field (must be squarefree and not 0 or 1)")]
    InvalidFieldParameter(i64),

    #[error("operation `{0}` needs a quadratic field, got Q")]
    NotQuadratic(&'static str),

    #[error("pole of {function} at s = {at}")]
    Pole { function: &'static str, at: String },

    #[error("{function}: argument {value} outside domain ({reason})")]
    Domain {
        function: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{what} did not converge after {iterations} iterations (last error estimate {estimate:e})")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        estimate: f64,
    },

    #[error("contour abscissa {abscissa} lies within {distance:e} of the pole at {pole}")]
    AbscissaNearPole {
        abscissa: f64,
        pole: f64,
        distance: f64,
    },

    #[error("{what}: independent routes disagree ({a:e} vs {b:e}, relative gap {gap:e} > {tolerance:e})")]
    RouteDisagreement {
        what: &'static str,
        a: f64,
        b: f64,
        gap: f64,
        tolerance: f64,
    },

    #[error("|zeta_K'(rho)| = {magnitude:e} at gamma = {gamma}: possible multiple zero")]
    MultipleZero { gamma: f64, magnitude: f64 },

    #[error("extrapolation residual {residual:e} exceeds {tolerance:e} for {what}")]
    Extrapolation {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("component `{component}` failed: {source}")]
    Component {
        component: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),

    #[error("config serialize error: {0}")]
    ConfigSerialize(#[from] toml::ser::Error),
}

impl Error {
    pub(crate) fn in_component(self, component: &'static str) -> Self {
        Error::Component {
            component,
            source: Box::new(self),
        }
    }

    /// Whether the failure is a numerical check falling outside its
    /// tolerance, as opposed to bad input or I/O.
    pub fn is_tolerance_failure(&self) -> bool {
        match self {
            Error::Component { source, .. } => source.is_tolerance_failure(),
            Error::NotConverged { .. }
            | Error::RouteDisagreement { .. }
            | Error::MultipleZero { .. }
            | Error::Extrapolation { .. }
            | Error::DegenerateFit(_) => true,
            _ => false,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
