use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by a series whose constant term vanishes")]
    ZeroConstantTerm,
    #[error("composition requires the inner series to vanish at 0 (got {0})")]
    InnerConstantNonzero(String),
    #[error("logarithm requires constant term 1 (got {0})")]
    LogConstantNotOne(String),
    #[error("power requires a nonzero constant term")]
    ConstantNotOne,
    #[error("non-finite coefficient produced by {0}")]
    NonFinite(&'static str),

    #[error("parameter {name} = {value} outside {range}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("(r, eps) = ({r}, {eps}) is not admissible: need 0 < r < 1 and 0 < eps <= min(eps0(r), 1/4) = {bound}")]
    NotInOmega { r: f64, eps: f64, bound: f64 },
    #[error("invalid lacunary sequence: {0}")]
    InvalidSequence(String),
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("missing parameter '{0}'")]
    MissingParam(&'static str),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("measure has mass {mass} < 1/2 at the requested point")]
    NoPoleMass { mass: f64 },

    #[error("non-finite sample at z = {0}")]
    NonFiniteSample(String),
    #[error("evaluation radius {radius} exceeds the trust radius {trust} of a truncated series")]
    OutsideTrustRadius { radius: f64, trust: f64 },
    #[error("regression ill-conditioned: {0}")]
    RegressionIllConditioned(String),
    #[error("bracket [{lo}, {hi}] does not straddle the critical exponent (gamma: {gamma_lo}, {gamma_hi})")]
    NoBracket {
        lo: f64,
        hi: f64,
        gamma_lo: f64,
        gamma_hi: f64,
    },
    #[error("quadrature did not converge: {0}")]
    QuadratureDiverged(String),

    #[error("derivative vanishes at {0}")]
    DerivativeVanishes(String),
    #[error("argument unwrapping failed: jump of {jump} rad between consecutive samples")]
    ArgUnwrapFailure { jump: f64 },

    #[error("check requires a2 = 0, got |a2| = {0}")]
    NotZeroA2(f64),

    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("io failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
