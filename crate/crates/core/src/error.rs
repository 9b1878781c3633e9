use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZonalError {
    #[error("incomparable weights: {0} and {1}")]
    IncomparableWeights(usize, usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("out of triangle: {lambda} > {kappa} in lexicographic order")]
    OutOfTriangle { kappa: String, lambda: String },
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("variable index {index} out of range for {vars} variables")]
    VariableIndex { index: usize, vars: usize },
    #[error("not divisible by (y{0} - y{1})")]
    NotDivisible(usize, usize),
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("input not symmetric: {0}")]
    InputNotSymmetric(String),
    #[error("partition {partition} has more than {vars} parts")]
    TooManyParts { partition: String, vars: usize },
    #[error("no closed form stored for {0}")]
    NoClosedForm(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("parameter singularity: {0}")]
    Singular(String),
    #[error("empty eigenvalue list")]
    EmptyEigenvalues,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, ZonalError>;
