use thiserror::Error;

use crate::estimators::EstimatorKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
///
/// Variants fall into three families, mirrored by [`Error::category`]:
/// bad input, numerical-domain violations, and degenerate data.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sample size: n = {n}, N = {population}")]
    SampleSize { n: usize, population: usize },

    #[error("length mismatch: {what} has {got} values, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("population needs at least 2 units, got {0}")]
    TooFewUnits(usize),

    #[error("non-finite value in `{variable}` at index {index}")]
    NonFinite { variable: &'static str, index: usize },

    #[error("variable `{0}` has zero variance")]
    ZeroVariance(&'static str),

    #[error("variable `{0}` has zero mean; its coefficient of variation is undefined")]
    ZeroMean(&'static str),

    #[error("empty sample")]
    EmptySample,

    #[error("sample mean of `{0}` is zero in a ratio denominator")]
    SingularSample(&'static str),

    #[error("log argument not positive for {which}: mean + psi = {value}")]
    LogDomain { which: &'static str, value: f64 },

    #[error("psi for `{which}` resolved to a non-finite value")]
    NonFinitePsi { which: &'static str },

    #[error("summary lacks fields required here: {}", .0.join(", "))]
    IncompleteSummary(Vec<&'static str>),

    #[error("|rho_xz| = {0} leaves the two-variable regression singular")]
    Collinear(f64),

    #[error("quadratic MSE coefficient {0} is not positive; optimum undefined")]
    DegenerateQuadratic(&'static str),

    #[error("first-order MSE for {kind} evaluates to {value}, which is negative")]
    NegativeMse { kind: EstimatorKind, value: f64 },

    #[error("PRE undefined: candidate MSE is {0}")]
    ZeroMse(f64),

    #[error("correlation {0} outside [-1, 1]")]
    Correlation(f64),

    #[error("|rho| = 1: variance inflation factor is infinite")]
    InfiniteVif,

    #[error("smallest eigenvalue is zero: condition index is infinite")]
    InfiniteConditionIndex,

    #[error("eigenvalues ({0}, {1}) are not ordered and nonnegative")]
    Eigenvalues(f64, f64),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is not positive definite: pivot {pivot} is {value}")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("csv: {0}")]
    Csv(String),

    #[error("missing column `{0}`")]
    MissingColumn(&'static str),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Input,
    Numerical,
    Degenerate,
}

impl Error {
    pub fn category(&self) -> Category {
        use Error::*;
        match self {
            SampleSize { .. }
            | LengthMismatch { .. }
            | TooFewUnits(_)
            | NonFinite { .. }
            | EmptySample
            | IncompleteSummary(_)
            | Config { .. }
            | Csv(_)
            | MissingColumn(_)
            | NotSymmetric { .. } => Category::Input,
            ZeroVariance(_) | InfiniteVif | InfiniteConditionIndex => Category::Degenerate,
            ZeroMean(_)
            | SingularSample(_)
            | LogDomain { .. }
            | NonFinitePsi { .. }
            | Collinear(_)
            | DegenerateQuadratic(_)
            | NegativeMse { .. }
            | ZeroMse(_)
            | Correlation(_)
            | Eigenvalues(..)
            | NotPositiveDefinite { .. } => Category::Numerical,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
