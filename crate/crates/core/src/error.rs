use thiserror::Error;

/// Errors produced by the lattice, Pell, stability and wall routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree parameter t must be at least 1 (got {0})")]
    InvalidDegree(u64),

    #[error("odd degree {0}: polarized K3 surfaces have even degree 2t")]
    OddDegree(u64),

    #[error("number of points n must be at least {min} (got {got})")]
    InvalidPoints { got: u64, min: u64 },

    #[error("Pell parameter D must be positive")]
    ZeroPellParameter,

    #[error("D = {0} is a perfect square; X^2 - D Y^2 = 1 has no positive solution")]
    SquarePellParameter(u64),

    #[error("integer overflow computing t(n-1) for t = {t}, n = {n}")]
    Overflow { t: u64, n: u64 },

    #[error("({a}, {b}) does not solve X^2 - {d} Y^2 = -1 with a, b > 0")]
    NotNegativePellSolution { a: String, b: String, d: u64 },

    #[error("existence criterion fails for t = {t}, n = {n}: {reason}")]
    CriterionFails { t: u64, n: u64, reason: String },

    #[error("matrix dimension mismatch: {left}x{left} against {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not an isometry of the given Gram matrix")]
    NotAnIsometry,

    #[error("discriminant multiplier {multiplier} is not a unit modulo {modulus}")]
    NonUnitMultiplier { multiplier: String, modulus: String },

    #[error("vector ({r}, {m}, {s}) is not in the span of (0,-H,0) and (1,0,n-1)")]
    OutsideNsSpan { r: String, m: String, s: String },

    #[error("stability parameter x must be positive (got {0})")]
    NonPositiveScale(String),

    #[error("path parameter lambda0 must be nonnegative (got {0})")]
    NegativeLambda0(String),

    #[error("charge invariance is only defined at lambda0 = 0 (got {0})")]
    NonzeroLambda0(String),

    #[error("the zero vector has no wall")]
    ZeroVector,

    #[error("vector ({r}, {m}, {s}) is not on the wall at lambda0 = {lambda0}")]
    NotOnWall {
        r: String,
        m: String,
        s: String,
        lambda0: String,
    },

    #[error("profile (p = {p}, k = {k}) has discriminant k^2 - 4p(n-1) = {disc} <= 0")]
    VacuousProfile { p: i64, k: i64, disc: String },

    #[error("empty range {0}")]
    EmptyRange(String),

    #[error("unknown output format {0:?} (expected \"text\" or \"json\")")]
    UnknownFormat(String),

    #[error("flop profile file, line {line}: {message}")]
    ProfileSyntax { line: usize, message: String },

    #[error("internal inconsistency for t = {t}, n = {n}: check {check} failed ({detail})")]
    Inconsistent {
        t: u64,
        n: u64,
        check: String,
        detail: String,
    },

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
