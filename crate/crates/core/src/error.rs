use thiserror::Error;

/// Failures raised anywhere in the solver pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input or intermediate value lies outside the admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The step controller asked for a step below the configured minimum.
    #[error("step underflow at t = {t}: required step {h} is below h_min = {h_min}")]
    StepUnderflow { t: f64, h: f64, h_min: f64 },

    /// The lower line never becomes steep enough for the tail integrand to decay.
    #[error("tail integrand does not decay beyond t = {t}")]
    NoDecay { t: f64 },

    /// No horizon up to the search limit satisfies the tail inequalities.
    #[error("no certified horizon T <= {limit:e} for eps = {eps:e}")]
    HorizonOverflow { eps: f64, limit: f64 },

    /// The endpoint shots do not straddle the target slope.
    #[error(
        "bracket failure: x'(T) = {dx_lo} at a_min = {a_min} and {dx_hi} at a_max = {a_max} do not straddle beta = {beta}"
    )]
    BracketFailure {
        a_min: f64,
        a_max: f64,
        dx_lo: f64,
        dx_hi: f64,
        beta: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
