use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("density is unbounded for xi = {xi} < -1; no mode exists")]
    UnboundedDensity { xi: f64 },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("need at least {need} observations, got {got}")]
    TooFewObservations { need: usize, got: usize },

    #[error("optimizer did not converge after {iterations} iterations (gradient norm {grad_norm:e})")]
    NonConvergence { iterations: usize, grad_norm: f64 },

    #[error("threshold index {index}: only {found} positive exceedances")]
    InsufficientExceedances { index: usize, found: usize },

    #[error("read window is empty for n = {n}")]
    EmptyWindow { n: usize },

    #[error("line {line}: cannot parse {token:?} as a number")]
    Parse { line: usize, token: String },

    #[error("no numeric values found in column {0}")]
    EmptyColumn(String),

    #[error("plot has no drawable series")]
    EmptyPlot,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}
