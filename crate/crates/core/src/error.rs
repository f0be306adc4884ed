use alloc::string::String;
use alloc::vec::Vec;

/// A single failed metric-space axiom, with the witnessing indices.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Violation {
    #[error("no points")]
    Empty,
    #[error("{labels} labels but {rows} matrix rows")]
    RowCount { labels: usize, rows: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("duplicate label {label:?} at {first} and {second}")]
    DuplicateLabel { label: String, first: usize, second: usize },
    #[error("entry ({i},{j}) is negative or NaN: {value}")]
    Negative { i: usize, j: usize, value: f64 },
    #[error("diagonal entry ({i},{i}) is {value}, expected 0")]
    NonZeroDiagonal { i: usize, value: f64 },
    #[error("distinct points {i} and {j} at distance 0")]
    ZeroOffDiagonal { i: usize, j: usize },
    #[error("d({i},{j}) = {dij} but d({j},{i}) = {dji}")]
    Asymmetric { i: usize, j: usize, dij: f64, dji: f64 },
    #[error("triangle inequality fails: d({x},{z}) > d({x},{y}) + d({y},{z})")]
    Triangle { x: usize, y: usize, z: usize },
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a valid extended real (finite values must be >= 0)")]
    InvalidExtReal(f64),
    #[error("scale factor must be a finite positive real, got {0}")]
    NonPositiveFactor(f64),
    #[error("cut-off radius must be positive")]
    ZeroCutoff,
    #[error("invalid metric space: {} violation(s)", .0.len())]
    InvalidMetric(Vec<Violation>),
    #[error("functions live on different spaces")]
    SpaceMismatch,
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("point index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("values are not 1-Lipschitz at ({x},{y})")]
    NotLipschitz { x: usize, y: usize },
    #[error("values are not (1,{epsilon})-Lipschitz at ({x},{y})")]
    NotEpsLipschitz { epsilon: f64, x: usize, y: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("search size {required} exceeds budget {allowed}")]
    BudgetExceeded { required: u128, allowed: u128 },
    #[error("probe at point {point} has no finite cone within {bound} (residual {residual})")]
    ProbeFailed { point: usize, residual: f64, bound: f64 },
    #[error("witness chooser misses probe {index} by {distance} > delta {delta}")]
    WitnessChooserFailed { index: usize, distance: f64, delta: f64 },
}
