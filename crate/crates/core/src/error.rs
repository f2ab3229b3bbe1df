use crate::model::AgentType;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument fell outside the domain of the function.
    #[error("{what} must be {requirement}, got {value}")]
    Domain {
        what: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// An effort would have to exceed the configured bound.
    #[error("{what}: effort {effort} exceeds the bound mu_max = {bound}")]
    BracketExceeded {
        what: &'static str,
        effort: f64,
        bound: f64,
    },

    /// A residual did not change sign on the search interval.
    #[error("{what}: no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoSignChange {
        what: &'static str,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// The root finder stopped without meeting its residual tolerance.
    #[error("{what}: residual {residual} at {x} exceeds tolerance {tolerance}")]
    Residual {
        what: &'static str,
        x: f64,
        residual: f64,
        tolerance: f64,
    },

    /// A parameter set violated a model invariant.
    #[error("invalid parameter {field}: {reason}")]
    InvalidParameter {
        field: &'static str,
        reason: &'static str,
    },

    /// The given type prefers the other type's contract; only the
    /// H-imitation regime is solved.
    #[error(
        "regime unsupported: type {imitator:?} prefers the other contract (ICC slack {slack})"
    )]
    RegimeUnsupported { imitator: AgentType, slack: f64 },

    /// A Monte Carlo estimate left the range of the utility function.
    #[error("numeric failure: {0}")]
    Numeric(&'static str),
}

impl Error {
    /// True for failures caused by effort brackets or root finding.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::BracketExceeded { .. }
                | Error::NoSignChange { .. }
                | Error::Residual { .. }
                | Error::Numeric(_)
        )
    }
}
