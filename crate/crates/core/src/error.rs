use thiserror::Error;

/// Errors reported by the library.
///
/// Numeric payloads are carried as `f64` so the type stays independent of the
/// scalar parameter used for the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coincident singularities: a = {a} coincides with {with}")]
    CoincidentSingularities { a: String, with: &'static str },

    #[error("point z = {z} is a singular point of the equation ({which})")]
    SingularPoint { z: String, which: &'static str },

    #[error("integration path passes within {distance:.3e} of the singular point {which} (minimum {minimum})")]
    PathTooClose { which: &'static str, distance: f64, minimum: f64 },

    #[error("step size underflow at t = {t:.6e}")]
    StepSizeUnderflow { t: f64 },

    #[error("step budget of {steps} exhausted before reaching the end of the interval")]
    StepBudgetExhausted { steps: usize },

    #[error("resonant exponent: recurrence leading coefficient vanishes at n = {n}")]
    ResonantExponent { n: usize },

    #[error("exponent {mu} is not a characteristic exponent at z = 0 (expected 0 or 1 - gamma)")]
    InvalidExponent { mu: String },

    #[error("denominator parameter {param} produces a zero factor at n = {n}")]
    ZeroDenominator { param: String, n: usize },

    #[error("series did not converge within {cap} terms (last term {last_term:.3e})")]
    NoConvergence { cap: usize, last_term: f64 },

    #[error("point z = {z} lies outside the safe disk |z - {center}| < {limit}")]
    OutsideSafeDisk { z: String, center: String, limit: f64 },

    #[error("epsilon = {epsilon} does not match the required value {expected}")]
    EpsilonMismatch { epsilon: String, expected: String },

    #[error("a = 1 is excluded: the top coefficient (a - 1)(epsilon + N) no longer fixes epsilon")]
    UnitSingularity,

    #[error("epsilon = 1 is exceptional: both exponents at z = a vanish and no generalized hypergeometric solution is known")]
    ExceptionalEpsilon,

    #[error("epsilon = {epsilon} is not an integer >= 2")]
    NonIntegerEpsilon { epsilon: String },

    #[error("found {found} of {expected} accessory-parameter solutions")]
    Shortfall { found: usize, expected: usize },

    #[error("auxiliary parameters are degenerate: {reason}")]
    DegenerateParameters { reason: String },

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("empty input")]
    EmptyInput,

    #[error("singular linear system")]
    SingularMatrix,

    #[error("{what} loses too many digits to cancellation (condition number {condition:e})")]
    PrecisionLoss { what: &'static str, condition: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("accessory-parameter condition violated by the mapped parameters (scaled residual {residual:.3e})")]
    QConditionViolated { residual: f64 },

    #[error("energy {energy} is not below the continuum threshold {threshold}")]
    AboveThreshold { energy: f64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn fmt_c<T: crate::Real>(z: crate::scalar::C<T>) -> String {
    format!("{}{:+}i", z.re, z.im)
}

pub(crate) fn to_f64<T: crate::Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
