use thiserror::Error;

/// Errors raised by the arithmetic, calculus and physics layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {value} lies outside the domain of `{bijection}`")]
    Domain { value: f64, bijection: String },

    #[error("division by the additive neutral element 0'")]
    DivisionByZeroPrime,

    #[error("lower-image value {lower} has no representable preimage (horizon)")]
    OverflowToBoundary { lower: f64 },

    #[error("operands belong to different arithmetic contexts")]
    ContextMismatch,

    #[error("custom bijection `{name}` is not strictly increasing near {at}")]
    NotMonotonic { name: String, at: f64 },

    #[error("custom bijection `{name}` fails the inverse round trip at {at}")]
    NotInvertible { name: String, at: f64 },

    #[error("lower difference quotient is not finite at {at}")]
    NonFiniteDerivative { at: f64 },

    #[error("integrand is not finite at {at}")]
    QuadratureFailure { at: f64 },

    #[error("expected a {expected} four-vector")]
    WrongVariance { expected: &'static str },

    #[error("effective metric is singular on axis {axis}")]
    SingularMetric { axis: usize },

    #[error("source coincides with the observer (f(Y1) = 0)")]
    SourceAtObserver,

    #[error("time ratio {ratio} is negative; the 2/3 power is undefined")]
    NegativeRatio { ratio: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse bijection `{input}`: {reason}")]
    ParseBijection { input: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
