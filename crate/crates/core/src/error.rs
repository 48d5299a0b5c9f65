use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial needs at least one coefficient")]
    EmptyPolynomial,

    #[error("coefficient {index} is not finite ({value})")]
    NonFiniteCoefficient { index: usize, value: f64 },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("radius {0} is outside [0, 1]")]
    RadiusOutOfRange(f64),

    #[error("{what} needs at least {required} nodes, got {actual}")]
    GridTooSmall {
        what: &'static str,
        required: usize,
        actual: usize,
    },

    #[error("{0}")]
    InvalidDegree(&'static str),

    #[error("harmonic index must be at least 1")]
    ZeroHarmonicIndex,

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("sample count must be at least 2, got {0}")]
    TooFewSamples(u64),

    #[error("ratio is undefined: {0}")]
    UndefinedRatio(&'static str),

    #[error("experiment `{experiment}` requires {expected} coefficients")]
    WrongDistribution {
        experiment: &'static str,
        expected: &'static str,
    },

    #[error("unknown experiment `{name}`; valid identifiers: {valid}")]
    UnknownExperiment { name: String, valid: String },

    #[error("unknown distribution `{0}`; expected `gaussian` or `uniform`")]
    UnknownDistribution(String),

    #[error("unknown measure `{0}`; expected `radial` or `area`")]
    UnknownMeasure(String),
}
